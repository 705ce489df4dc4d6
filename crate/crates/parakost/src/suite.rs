//! Named verification checks over a range of sizes.
//!
//! A cell is one `(check, n)` pair. Cells outside a check's domain are
//! skipped rather than reported.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::feff::{self, Source};
use crate::gla::{verify_structure, GradedLieAlgebra};
use crate::kostant::{verify_complex, verify_hodge, ChainContext};
use crate::penrose;
use crate::report::Report;
use crate::sample::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Jacobi,
    Hodge,
    CodiffLift,
    BianchiPath,
    PathNormality,
    BetaSecondSum,
    AgCostar,
    NormModules,
    NormalizeStep,
    Memberships,
    TorsionTransfer,
    RhoRicci,
    HarmonicTypes,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Jacobi,
        Check::Hodge,
        Check::CodiffLift,
        Check::BianchiPath,
        Check::PathNormality,
        Check::BetaSecondSum,
        Check::AgCostar,
        Check::NormModules,
        Check::NormalizeStep,
        Check::Memberships,
        Check::TorsionTransfer,
        Check::RhoRicci,
        Check::HarmonicTypes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Jacobi => "jacobi",
            Check::Hodge => "hodge",
            Check::CodiffLift => "codiff-lift",
            Check::BianchiPath => "bianchi-path",
            Check::PathNormality => "path-normality",
            Check::BetaSecondSum => "beta-secondsum",
            Check::AgCostar => "ag-costar",
            Check::NormModules => "norm-modules",
            Check::NormalizeStep => "normalize-step",
            Check::Memberships => "memberships",
            Check::TorsionTransfer => "torsion-transfer",
            Check::RhoRicci => "rho-ricci",
            Check::HarmonicTypes => "harmonic-types",
        }
    }

    /// Smallest size the check is defined for.
    pub fn min_n(self) -> usize {
        match self {
            Check::AgCostar | Check::NormModules | Check::NormalizeStep | Check::RhoRicci => Source::Ag.min_n(),
            _ => Source::Path.min_n(),
        }
    }

    /// Runs one cell; `None` when `n` is out of range for this check.
    pub fn run(self, n: usize, seed: u64, trials: usize) -> Option<Report> {
        if n < self.min_n() {
            return None;
        }
        let mut sampler = Sampler::new(cell_seed(seed, self, n));
        let ag = n >= Source::Ag.min_n();
        let report = match self {
            Check::Jacobi => {
                let mut r = Report::new(self.name(), n);
                let path = Source::Path.blocks(n);
                let target = feff::target_blocks(n);
                let split = [2, 1, n];
                for blocks in [&path[..], &[2, n], &target[..], &split] {
                    let label = format!("{blocks:?}");
                    r.absorb_as(&label, verify_structure(&GradedLieAlgebra::new(blocks), self.name(), n));
                }
                r
            }
            Check::Hodge => per_grading(self, n, ag, &mut sampler, |ctx, _| verify_hodge(ctx, 2, self.name(), n)),
            Check::CodiffLift => per_grading(self, n, ag, &mut sampler, |ctx, s| verify_complex(ctx, self.name(), n, s)),
            Check::BianchiPath => feff::verify_bianchi_path(n),
            Check::PathNormality => feff::verify_path_normality(n),
            Check::BetaSecondSum => feff::verify_beta_and_second_sum(n),
            Check::AgCostar => feff::verify_ag_costar(n, cell_seed(seed, self, n), trials),
            Check::NormModules => feff::verify_norm_modules(n),
            Check::NormalizeStep => feff::verify_normalize_step(n, cell_seed(seed, self, n), trials),
            Check::Memberships => {
                let mut r = Report::new(self.name(), n);
                r.absorb_as("path", feff::verify_transfer_memberships(n, Source::Path));
                if ag {
                    r.absorb_as("ag", feff::verify_transfer_memberships(n, Source::Ag));
                }
                r
            }
            Check::TorsionTransfer => feff::verify_torsion_transfer(n),
            Check::RhoRicci => penrose::verify_rho_ricci(n, &mut sampler, trials),
            Check::HarmonicTypes => {
                let mut r = Report::new(self.name(), n);
                r.absorb_as("path", feff::verify_path_harmonic_types(n));
                if ag {
                    r.absorb_as("ag", penrose::verify_harmonic_types_ag(n));
                }
                r
            }
        };
        Some(report)
    }
}

fn per_grading(
    check: Check,
    n: usize,
    ag: bool,
    sampler: &mut Sampler,
    f: impl Fn(&Arc<ChainContext>, &mut Sampler) -> Report,
) -> Report {
    let mut r = Report::new(check.name(), n);
    r.absorb_as("path", f(&ChainContext::new(&Source::Path.blocks(n)), sampler));
    if ag {
        r.absorb_as("ag", f(&ChainContext::new(&Source::Ag.blocks(n)), sampler));
    }
    r
}

/// Per-cell seed, so that a cell's outcome does not depend on which other
/// cells run.
pub fn cell_seed(seed: u64, check: Check, n: usize) -> u64 {
    let tag = Check::ALL.iter().position(|&c| c == check).unwrap() as u64;
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add((tag << 32) | n as u64)
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// All cells of `checks × [n_min, n_max]` in check-major order.
pub fn run_cells(checks: &[Check], n_min: usize, n_max: usize, seed: u64, trials: usize) -> Vec<Report> {
    checks.iter().flat_map(|&c| (n_min..=n_max).filter_map(move |n| c.run(n, seed, trials))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn out_of_domain_cells_are_skipped() {
        assert!(Check::AgCostar.run(2, 0, 1).is_none());
        assert!(Check::Jacobi.run(1, 0, 1).is_none());
    }
}
