//! Scalar numerics: the standard normal distribution, bracketed root finding
//! and a counter-addressed random stream.

mod normal;
mod prob;
mod root;
mod stream;

pub use normal::{
    gaussian_cdf, gaussian_quantile, integrate_density, log_normal_density, std_normal_cdf,
    std_normal_quantile, std_normal_sf,
};
pub use prob::Prob;
pub use root::find_root;
pub use stream::RandomStream;
