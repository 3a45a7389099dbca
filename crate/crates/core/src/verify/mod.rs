//! Numerical evidence for the contraction hypotheses: equivariant maps and
//! vector fields on orbit samples, their spacelike Lipschitz statistics,
//! escape and properness probes, and fixed points of contracting maps.

mod banach;
mod estimates;
mod orbit;
mod probes;

pub use banach::{banach_bound, banach_projection, hyperbolic_distance, BanachOutcome};
pub use estimates::{
    estimate_spacelike_lipschitz, estimate_vf_lipschitz, ContractionReport, Fit, PairRecord,
    ReportKind, DEFAULT_SEPARATION, MIN_SPACELIKE_PAIRS,
};
pub use orbit::{rational_base, EquivariantMap, OrbitPoint, OrbitSample, VectorField};
pub use probes::{
    properness_probe_affine, properness_probe_group, quadric_expansion_check, random_lie_elements,
    spacelike_escape_check, AffineProbe, AffineProbeEntry, EscapeReport, EscapeWitness, GroupProbe,
    GroupProbePoint, QuadricReport,
};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The sample cannot decide, e.g. an argmin on the sample boundary.
    Inconclusive,
    /// Nothing to check.
    Vacuous,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Vacuous)
    }
}
