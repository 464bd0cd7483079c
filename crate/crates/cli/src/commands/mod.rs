pub mod decode;
pub mod distance;
pub mod export;
pub mod params;
pub mod pseudothreshold;
pub mod search;
pub mod simulate;
