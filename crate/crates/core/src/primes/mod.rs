//! Prime sieving and the prime-distribution estimates built on it.

mod cache;
mod counts;
mod miller_rabin;
mod sieve;
mod tail;

pub use cache::{cache_path, load_or_sieve, load_or_sieve_in, read_table, write_table, CACHE_ENV};
pub use counts::{
    interval_prime_count, large_interval_constant, power_interval, small_interval_nonempty,
    SMALL_INTERVAL_THRESHOLD,
};
pub use miller_rabin::is_prime_u64;
pub use sieve::{sieve, sieve_with_cap, PrimeIter, PrimeTable, DEFAULT_SIEVE_CAP};
pub use tail::{prime_square_tail, TailSumResult};
