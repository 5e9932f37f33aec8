//! Exact verification of cocycle, cup-product and local-integral formulas for
//! quaternionic and `PGL2` automorphic periods, plus numerical period experiments
//! for elliptic curves over `Q`.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exact;
pub mod gkcomplex;
pub mod gkreal;
pub mod local;
pub mod periods;
pub mod quat;
pub mod rep;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/real.md")]
    mod real {}
    #[doc = include_str!("../../../book/src/complex.md")]
    mod complex {}
    #[doc = include_str!("../../../book/src/quaternions.md")]
    mod quaternions {}
    #[doc = include_str!("../../../book/src/local.md")]
    mod local {}
    #[doc = include_str!("../../../book/src/periods.md")]
    mod periods {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
