//! Numerical verification of the defining properties of potentials, kernels
//! and the annulus Green kernel.
//!
//! Every check produces a [`Check`] with a measured quantity and a threshold;
//! a check passes iff `measured <= threshold`. Negative controls are checks
//! that are expected to fail, which keeps the suite falsifiable.

mod checks;
mod nakai;
mod oracle;
mod sublevel;
pub mod suite;

pub use checks::{
    approach_point, approach_radii, check_boundary_divergence, check_harmonic, check_harmonic_on,
    check_kernel_boundary_difference, check_pole_regularity, Harmonic, DEFAULT_DIFFERENCE_TOL,
    DEFAULT_DIVERGENCE_BAR, DEFAULT_POLE_THRESHOLD,
};
pub use nakai::{
    nakai_convergence_study, standard_sample_set, ConvergenceReport, DEFAULT_SEED,
    STANDARD_SAMPLE_COUNT,
};
pub use oracle::{fd_green_oracle, oracle_sup_deviation, FDOracleGrid, ORACLE_RESIDUAL_TOL};
pub use sublevel::{compare_sublevel_sets, sublevel_crossings, SublevelEntry, SublevelReport};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::kernel::BoundaryElement;
use crate::Point;

/// Whether a check is expected to pass or is a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

/// Input exhibiting the measured value (one point or an evaluation pair).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Witness {
    Point(Point),
    Pair(Point, Point),
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let points: &[Point] = match self {
            Witness::Point(p) => std::slice::from_ref(p),
            Witness::Pair(p, q) => &[*p, *q],
        };
        let mut seq = serializer.serialize_seq(Some(points.len()))?;
        for p in points {
            seq.serialize_element(&p.to_string())?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expect: Expect,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
        witness: Option<Witness>,
    ) -> Self {
        Self {
            name: name.into(),
            expect: Expect::Pass,
            // NaN never passes
            passed: measured <= threshold,
            measured,
            threshold,
            witness,
        }
    }

    /// Marks the check as a negative control.
    pub fn negative_control(mut self) -> Self {
        self.expect = Expect::Fail;
        self
    }

    /// Whether the outcome matches the expectation.
    pub fn ok(&self) -> bool {
        self.passed == (self.expect == Expect::Pass)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PropertyReport {
    pub checks: Vec<Check>,
}

impl PropertyReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: PropertyReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Short label used in check names.
pub fn boundary_label(element: &BoundaryElement<f64>) -> String {
    match element {
        BoundaryElement::Puncture(c) if c.im == 0.0 => format!("{}", c.re),
        BoundaryElement::Puncture(c) => c.to_string(),
        BoundaryElement::Infinity => "inf".to_string(),
        BoundaryElement::Circle(radius) => format!("circle_{radius}"),
    }
}
