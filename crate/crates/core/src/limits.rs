/// Numeric bounds shared by every enumeration and search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub group_order: usize,
    pub elements: usize,
    pub aut_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_order: 24,
            elements: 2_000_000,
            aut_vertices: 64,
        }
    }
}
