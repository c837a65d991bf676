use rayon::prelude::*;
use serde::Serialize;

use super::nesting::{nesting_certificate, NestingOutcome, NestingParams, NestingStatus};
use super::score::{score_classes, ScoreRecord};
use crate::error::{Error, Result};
use crate::group::{enumerate_separable_classes, CyclicClass, Presentation};
use crate::hyperbolic::{classify, IsometryClass, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    CertifiedAtDepth,
    Rejected,
    Undetermined,
}

/// Why a representation was rejected. Identity images count as parabolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectionKind {
    Parabolic,
    Elliptic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub class: String,
    pub cayley_length: usize,
    pub isometry_class: IsometryClass,
    pub trace: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingSummary {
    pub class: String,
    #[serde(flatten)]
    pub outcome: NestingOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyParams {
    pub depth: usize,
    pub enlargement: usize,
    pub nesting: NestingParams,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub rejection: Option<RejectionKind>,
    pub score: Option<ScoreRecord>,
    pub witness: Option<Witness>,
    pub nesting: Vec<NestingSummary>,
    pub params: CertifyParams,
    pub notes: Vec<String>,
}

impl StabilityVerdict {
    /// Verdict codes used by the scanner: 0 certified, 1 rejected parabolic,
    /// 2 rejected elliptic, 3 undetermined.
    pub fn code(&self) -> u8 {
        match (self.kind, self.rejection) {
            (VerdictKind::CertifiedAtDepth, _) => 0,
            (VerdictKind::Rejected, Some(RejectionKind::Elliptic)) => 2,
            (VerdictKind::Rejected, _) => 1,
            (VerdictKind::Undetermined, _) => 3,
        }
    }

    /// The word most relevant to the verdict: the rejection witness, else the first
    /// class whose nesting check did not pass, else the ratio minimizer.
    pub fn witness_word(&self) -> String {
        if let Some(w) = &self.witness {
            return w.class.clone();
        }
        if let Some(n) = self.nesting.iter().find(|n| !n.outcome.passed()) {
            return n.class.clone();
        }
        self.score.as_ref().map(|s| s.argmin_word.clone()).unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable verdict")
    }
}

/// Certificate over the separable classes of length at most `depth`.
pub fn certify(
    rep: &Representation,
    p: &Presentation,
    depth: usize,
    enlargement: usize,
    params: &NestingParams,
    tol: f64,
) -> Result<StabilityVerdict> {
    let classes = enumerate_separable_classes(p, depth, enlargement)?;
    certify_classes(rep, &classes, depth, enlargement, params, tol)
}

/// Certificate over an explicit list of separable classes, in list order.
pub fn certify_classes(
    rep: &Representation,
    classes: &[CyclicClass],
    depth: usize,
    enlargement: usize,
    params: &NestingParams,
    tol: f64,
) -> Result<StabilityVerdict> {
    params.validate()?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::config("tolerance", "must be positive and finite"));
    }
    if classes.is_empty() {
        return Err(Error::input("no separable classes to test; increase the depth"));
    }
    let p = rep.presentation();
    let mut verdict = StabilityVerdict {
        kind: VerdictKind::Undetermined,
        rejection: None,
        score: None,
        witness: None,
        nesting: Vec::new(),
        params: CertifyParams {
            depth,
            enlargement,
            nesting: *params,
            tolerance: tol,
        },
        notes: rep.warnings().to_vec(),
    };

    // (a) a non-loxodromic separable image rules out separable-stability
    let infos: Vec<Result<_>> = classes
        .par_iter()
        .map(|c| classify(&rep.eval(c.letters()), tol))
        .collect();
    for (c, info) in classes.iter().zip(infos) {
        let info = match info {
            Ok(i) => i,
            Err(e) => {
                verdict.notes.push(format!("classification of {} failed: {e}", c.display(p)));
                return Ok(verdict);
            }
        };
        let rejection = match info.class {
            IsometryClass::Loxodromic => continue,
            IsometryClass::Elliptic => RejectionKind::Elliptic,
            IsometryClass::Parabolic | IsometryClass::Identity => RejectionKind::Parabolic,
        };
        verdict.kind = VerdictKind::Rejected;
        verdict.rejection = Some(rejection);
        verdict.witness = Some(Witness {
            class: c.display(p),
            cayley_length: c.cayley_length,
            isometry_class: info.class,
            trace: [info.trace.re, info.trace.im],
        });
        verdict.score = Some(score_classes(rep, classes, depth)?);
        return Ok(verdict);
    }

    let score = score_classes(rep, classes, depth)?;
    let outcomes: Vec<Result<NestingOutcome>> =
        classes.par_iter().map(|c| nesting_certificate(rep, c, params)).collect();
    let mut all_pass = true;
    for (c, out) in classes.iter().zip(outcomes) {
        let outcome = match out {
            Ok(o) => o,
            Err(e) => NestingOutcome {
                status: NestingStatus::Undetermined,
                min_spacing: 0.0,
                planes: 0,
                witness_index: None,
                detail: Some(e.to_string()),
            },
        };
        all_pass &= outcome.passed();
        verdict.nesting.push(NestingSummary {
            class: c.display(p),
            outcome,
        });
    }
    if all_pass && score.min_ratio > 0.0 {
        verdict.kind = VerdictKind::CertifiedAtDepth;
    } else if all_pass {
        verdict
            .notes
            .push("every nesting check passed but the minimal ratio is not positive".into());
    }
    verdict.score = Some(score);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{rep_from_traces, rotation, H3Point, MoebiusMap, DEFAULT_PARABOLIC_TOL};
    use num_complex::Complex64;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn parabolic_generator_rejected() {
        let f2 = Presentation::free(2).unwrap();
        let rep = rep_from_traces(r(2.0), r(3.0), r(3.0)).unwrap();
        let v = certify(&rep, &f2, 4, 0, &NestingParams::default(), DEFAULT_PARABOLIC_TOL).unwrap();
        assert_eq!(v.kind, VerdictKind::Rejected);
        assert_eq!(v.rejection, Some(RejectionKind::Parabolic));
        assert_eq!(v.witness.as_ref().unwrap().class, "a");
        assert_eq!(v.code(), 1);
    }

    #[test]
    fn elliptic_generator_rejected() {
        let f2 = Presentation::free(2).unwrap();
        let b = MoebiusMap::diagonal(r(3.0));
        let rep = Representation::new(f2.clone(), vec![rotation(2.0 * std::f64::consts::PI / 3.0), b], H3Point::origin())
            .unwrap();
        let v = certify(&rep, &f2, 3, 0, &NestingParams::default(), DEFAULT_PARABOLIC_TOL).unwrap();
        assert_eq!(v.kind, VerdictKind::Rejected);
        assert_eq!(v.rejection, Some(RejectionKind::Elliptic));
        assert_eq!(v.code(), 2);
    }

    #[test]
    fn verdict_serializes() {
        let f2 = Presentation::free(2).unwrap();
        let rep = rep_from_traces(r(2.0), r(3.0), r(3.0)).unwrap();
        let v = certify(&rep, &f2, 2, 0, &NestingParams::default(), DEFAULT_PARABOLIC_TOL).unwrap();
        let json: serde_json::Value = serde_json::from_str(&v.to_json()).unwrap();
        assert_eq!(json["kind"], "REJECTED");
        assert_eq!(json["witness"]["class"], "a");
    }
}
