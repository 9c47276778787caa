/// Resource caps shared by everything that exhausts a group or ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group or ring that may be enumerated.
    pub enumeration_cap: u64,
    /// Largest number of word or polynomial evaluations per image.
    pub work_cap: u64,
    /// Dense multiplication tables are built up to this order.
    pub table_cap: u64,
    /// Worker threads for image computation; 1 selects the sequential path.
    pub workers: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: 1_000_000,
            work_cap: 100_000_000,
            table_cap: 4096,
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        }
    }
}

impl Limits {
    pub fn sequential() -> Self {
        Limits {
            workers: 1,
            ..Limits::default()
        }
    }
}
