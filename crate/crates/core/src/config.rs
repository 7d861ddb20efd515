/// Resource limits and the random seed shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest total degree a polynomial result may reach.
    pub max_degree: u32,
    /// Largest level `n` accepted by the `D_n` and cover operations.
    pub max_n: usize,
    /// Largest number of variables a jet context may allocate.
    pub max_symbols: usize,
    /// Seed for witness searches and randomized cross-checks.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_degree: 64,
            max_n: 6,
            max_symbols: 1 << 16,
            seed: 0,
        }
    }
}

impl Config {
    pub fn check_level(&self, n: usize) -> crate::Result<()> {
        if n == 0 || n > self.max_n {
            return Err(crate::Error::LevelOutOfRange { n, max: self.max_n });
        }
        Ok(())
    }
}
