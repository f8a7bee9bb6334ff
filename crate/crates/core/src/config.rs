/// Caps on the parameters that drive exponential work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest subset universe an automaton may encode as a bitmask
    /// (NValue, Uses values; ValSymBreak symmetries). At most 63.
    pub mask_width: u32,
    /// Largest backdoor, in undecided 0/1 variables, the enumeration accepts.
    pub k_max: u32,
    /// Largest product of run counts the interval lifting will enumerate.
    pub run_product_cap: u64,
    /// Largest domain product the brute-force oracle will enumerate.
    pub oracle_cap: u128,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mask_width: 32,
            k_max: 20,
            run_product_cap: 4096,
            oracle_cap: 10_000_000,
        }
    }
}
