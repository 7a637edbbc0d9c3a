pub mod amplify;
pub mod boolfn;
pub mod cache;
pub mod degrees;
pub mod error;
pub mod experiments;
pub mod expr;
pub mod gadgets;
pub mod lp;
pub mod polynomial;
pub mod rational;
pub mod spectral;
pub mod symmetry;
