//! Length functions on finitely generated groups and their asymptotic
//! comparison.
//!
//! - [`groups`]: `Z`, `Z^d`, `D_inf`, `C_m x| Z^2` and free groups, with exact
//!   arithmetic and generating sets.
//! - [`lengths`]: closed-form norms, word metrics, smoothings over balls and
//!   rescalings, with budgeted ball enumeration.
//! - [`asymptotics`]: ratio profiles over annuli, the `alpha` estimator,
//!   domination verdicts and convergence tables.
//! - [`geometry`]: R-chain geodesicity and two-point homogeneity on finite
//!   metric spaces.
//! - [`cli`]: the `coarse` command line and its verification scenarios.
//!
//! ```
//! use coarse::asymptotics::{alpha, ProfileParams};
//! use coarse::groups::GroupDescriptor;
//! use coarse::lengths::{Budget, LengthFunction};
//!
//! let g = GroupDescriptor::Zd(2);
//! let l1 = LengthFunction::parse(g, "l1", Budget::default()).unwrap();
//! let linf = LengthFunction::parse(g, "linf", Budget::default()).unwrap();
//! let (_, est) = alpha(&l1, &linf, ProfileParams::new(100.0), None).unwrap();
//! assert!((est.alpha_hat - 2f64.ln()).abs() < 1e-12);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod geometry;
pub mod groups;
pub mod lengths;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/groups.md")]
    struct Groups;
    #[doc = include_str!("../../../book/src/lengths.md")]
    struct Lengths;
    #[doc = include_str!("../../../book/src/alpha.md")]
    struct Alpha;
    #[doc = include_str!("../../../book/src/convergence.md")]
    struct Convergence;
    #[doc = include_str!("../../../book/src/geometry.md")]
    struct Geometry;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
}
