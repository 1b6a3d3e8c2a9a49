//! Claim registry and runners.
//!
//! Assert claims hold on the implemented model and pass or fail. Probe
//! claims record what holds and what does not, and never fail.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{
    ce_formula, differential, scalar_extension_compare, verify_d_squared, ComplexSpec, Scalars,
    SignMode,
};
use crate::config::Instance;
use crate::error::{Error, Result};
use crate::poisson::{Multivector, PoissonStructure};
use crate::poly::{APoly, Polynomial, QPoly};
use crate::prolong::{
    expand_components, near_point_eval, p_lift, prolong_function, ProlongedCoordinates, Prolongation,
};
use crate::random::Sampler;
use crate::rational::format_rational;
use crate::ring::{Rationals, Ring};
use crate::weil_algebra::{AlgElement, LinearForm, WeilAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
}

impl ClaimId {
    pub const ALL: [ClaimId; 10] = [
        ClaimId::C1,
        ClaimId::C2,
        ClaimId::C3,
        ClaimId::C4,
        ClaimId::C5,
        ClaimId::C6,
        ClaimId::C7,
        ClaimId::C8,
        ClaimId::C9,
        ClaimId::C10,
    ];

    pub fn info(self) -> &'static ClaimInfo {
        &REGISTRY[self as usize]
    }

    /// Parses a comma-separated list, or `all`.
    pub fn parse_list(text: &str) -> Result<Vec<ClaimId>> {
        if text.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::ALL.to_vec());
        }
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let id: ClaimId = part.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", *self as usize + 1)
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let n = t
            .strip_prefix('C')
            .or_else(|| t.strip_prefix('c'))
            .and_then(|d| d.parse::<usize>().ok());
        match n {
            Some(k @ 1..=10) => Ok(Self::ALL[k - 1]),
            _ => Err(Error::UnknownClaim(t.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    Assert,
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ingredient {
    ValidPoisson,
    HomogeneousPoisson,
    PForm,
}

impl Ingredient {
    fn describe(self) -> &'static str {
        match self {
            Ingredient::ValidPoisson => "a Poisson structure satisfying Jacobi",
            Ingredient::HomogeneousPoisson => "a homogeneous Poisson structure",
            Ingredient::PForm => "a p_form",
        }
    }
}

#[derive(Debug)]
pub struct ClaimInfo {
    pub id: ClaimId,
    pub statement: &'static str,
    pub anchor: &'static str,
    pub procedure: &'static str,
    pub semantics: Semantics,
    pub needs: &'static [Ingredient],
}

static REGISTRY: [ClaimInfo; 10] = [
    ClaimInfo {
        id: ClaimId::C1,
        statement: "f ↦ f^A is an algebra homomorphism, compatible with evaluation at near points",
        anchor: "(f+g)^A = f^A+g^A, (λf)^A = λ·f^A, (f·g)^A = f^A·g^A",
        procedure: "sample f, g, λ and a near point ξ; compare both sides as A-polynomials, as values at ξ, and after component expansion",
        semantics: Semantics::Assert,
        needs: &[],
    },
    ClaimInfo {
        id: ClaimId::C2,
        statement: "near-point law: the augmentation of ξ(f) is f at the base point",
        anchor: "the real part of ξ(f) is exactly f(x)",
        procedure: "sample f and ξ; compare augmentation(ξ(f)) with f(π_M ξ), and ξ(f) with f^A(ξ) and with its reassembled components",
        semantics: Semantics::Assert,
        needs: &[],
    },
    ClaimInfo {
        id: ClaimId::C3,
        statement: "the prolonged bracket restricts to the prolongation of the bracket",
        anchor: "{,}_A is the prolongation on M^A of the structure of Poisson on M",
        procedure: "sample f, g; compare {f^A, g^A}_A with ({f,g})^A",
        semantics: Semantics::Assert,
        needs: &[Ingredient::ValidPoisson],
    },
    ClaimInfo {
        id: ClaimId::C4,
        statement: "{,}_A is A-bilinear, skew, Leibniz and Jacobi on A-polynomials",
        anchor: "the Poisson bracket on C^∞(M^A,A) is A-bilinear",
        procedure: "sample φ, ψ, χ over A and a ∈ A; check each identity exactly",
        semantics: Semantics::Assert,
        needs: &[Ingredient::ValidPoisson],
    },
    ClaimInfo {
        id: ClaimId::C5,
        statement: "the τ̃ route and the direct formula give the same bracket on all A-polynomials",
        anchor: "{φ,ψ}_A = τ̃_φ(ψ)",
        procedure: "sample φ, ψ, χ over A; compare τ̃_φ(ψ) with {φ,ψ}_A, check τ̃_{φψ} = φτ̃_ψ + ψτ̃_φ and the prolonged-argument case",
        semantics: Semantics::Assert,
        needs: &[Ingredient::ValidPoisson],
    },
    ClaimInfo {
        id: ClaimId::C6,
        statement: "both differentials square to zero",
        anchor: "d̃∘d̃ = 0",
        procedure: "multiply consecutive boundary blocks over ℚ and A scalars in both sign modes, and apply d twice to sampled multivectors",
        semantics: Semantics::Assert,
        needs: &[],
    },
    ClaimInfo {
        id: ClaimId::C7,
        statement: "composition with T^A: f ↦ f^A intertwines d̃ and d̃_A",
        anchor: "Representations τ and τ̃ are isomorphic",
        procedure: "sample A-cochains Ω and real arguments; compare d̃(Ω∘T^A)(f_1..f_{p+1}) with (d̃_A Ω)(f_1^A..f_{p+1}^A) in the instance's sign mode",
        semantics: Semantics::Assert,
        needs: &[Ingredient::ValidPoisson],
    },
    ClaimInfo {
        id: ClaimId::C8,
        statement: "prolonged cochains are cochains, and η ↦ η^A commutes with the differentials",
        anchor: "η^A ∈ Λ^p_Pois(M^A, ∼)",
        procedure: "sample real η and arguments; check η^A(f^A..) = (η(f..))^A, then compare d_A(η^A) with (dη)^A for all four sign-mode pairings; same-mode pairings are asserted, mixed ones recorded",
        semantics: Semantics::Assert,
        needs: &[Ingredient::ValidPoisson],
    },
    ClaimInfo {
        id: ClaimId::C9,
        statement: "cohomology with A scalars is A ⊗ the real cohomology",
        anchor: "H_Pois(M^A,A) and A ⊗ H_Pois(M^A) are isomorphic",
        procedure: "compute exact Betti tables over ℚ and over A in the truncation window; require dim_ℝ H_A = dim A · dim H cell by cell",
        semantics: Semantics::Assert,
        needs: &[Ingredient::ValidPoisson, Ingredient::HomogeneousPoisson],
    },
    ClaimInfo {
        id: ClaimId::C10,
        statement: "restriction of {,}_A to real functions on M^A, probed against the p-lift",
        anchor: "{,}_ℝ = {,}_A restricted to C^∞(M^A) × C^∞(M^A)",
        procedure: "for each component γ compare {(f^A)_γ, (g^A)_γ} under the p-lift with ({f,g}^A)_γ; also record the defining property {⟨p,a f^A⟩, ⟨p,b g^A⟩} = ⟨p, ab {f,g}^A⟩",
        semantics: Semantics::Probe,
        needs: &[Ingredient::ValidPoisson, Ingredient::PForm],
    },
];

/// Statement, anchor and procedure of a claim.
pub fn explain(id: &str) -> Result<String> {
    let info = id.parse::<ClaimId>()?.info();
    let kind = match info.semantics {
        Semantics::Assert => "assert",
        Semantics::Probe => "probe",
    };
    let mut out = format!("{} ({kind}): {}\n", info.id, info.statement);
    out.push_str(&format!("  anchor: \"{}\"\n", info.anchor));
    out.push_str(&format!("  procedure: {}\n", info.procedure));
    if !info.needs.is_empty() {
        let needs: Vec<&str> = info.needs.iter().map(|n| n.describe()).collect();
        out.push_str(&format!("  needs: {}\n", needs.join(", ")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Recorded,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
}

/// One row of a relation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub relation: String,
    pub holds: bool,
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub instance: String,
    pub semantics: Semantics,
    pub status: Status,
    pub seed: u64,
    pub samples: usize,
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Counts equality checks and keeps the first failure.
#[derive(Debug, Default)]
struct Tally {
    checks: usize,
    witness: Option<Witness>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) -> bool {
        self.checks += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
        ok
    }

    fn poly<R: Ring>(
        &mut self,
        check: &str,
        inputs: impl FnOnce() -> Vec<String>,
        lhs: &Polynomial<R>,
        rhs: &Polynomial<R>,
    ) -> bool {
        self.record(lhs == rhs, || Witness {
            check: check.to_string(),
            inputs: inputs(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            residual: (lhs - rhs).to_string(),
        })
    }

    fn element(
        &mut self,
        algebra: &WeilAlgebra,
        check: &str,
        inputs: impl FnOnce() -> Vec<String>,
        lhs: &AlgElement,
        rhs: &AlgElement,
    ) -> bool {
        self.record(lhs == rhs, || Witness {
            check: check.to_string(),
            inputs: inputs(),
            lhs: algebra.format(lhs),
            rhs: algebra.format(rhs),
            residual: algebra.format(&Ring::sub(algebra, lhs, rhs)),
        })
    }

    fn ok(&self) -> bool {
        self.witness.is_none()
    }

    fn into_finding(self, relation: String) -> Finding {
        Finding {
            relation,
            holds: self.witness.is_none(),
            checks: self.checks,
            witness: self.witness,
        }
    }
}

struct Outcome {
    checks: usize,
    witness: Option<Witness>,
    findings: Vec<Finding>,
    note: Option<String>,
    /// Overrides pass/fail for assert claims whose verdict is not the tally.
    failed: Option<bool>,
}

impl From<Tally> for Outcome {
    fn from(t: Tally) -> Self {
        Outcome {
            checks: t.checks,
            witness: t.witness,
            findings: Vec::new(),
            note: None,
            failed: None,
        }
    }
}

fn missing(inst: &Instance, id: ClaimId) -> Option<Ingredient> {
    id.info().needs.iter().copied().find(|need| match need {
        Ingredient::ValidPoisson => !inst.is_valid_poisson(),
        Ingredient::HomogeneousPoisson => crate::cohomology::grading_degree(&inst.pi).is_err(),
        Ingredient::PForm => inst.p_form.is_none(),
    })
}

/// Runs one claim on one instance. Missing ingredients are an error.
pub fn run_claim(id: ClaimId, inst: &Instance, seed: u64, samples: usize) -> Result<ClaimReport> {
    if let Some(need) = missing(inst, id) {
        return Err(Error::MissingIngredient(format!(
            "{id} on {} needs {}",
            inst.name,
            need.describe()
        )));
    }
    let mut s = Sampler::stream(seed, &format!("{id}/{}", inst.name));
    let out = match id {
        ClaimId::C1 => c1(inst, &mut s, samples),
        ClaimId::C2 => c2(inst, &mut s, samples),
        ClaimId::C3 => c3(inst, &mut s, samples)?,
        ClaimId::C4 => c4(inst, &mut s, samples)?,
        ClaimId::C5 => c5(inst, &mut s, samples)?,
        ClaimId::C6 => c6(inst, &mut s, samples)?,
        ClaimId::C7 => c7(inst, &mut s, samples)?,
        ClaimId::C8 => c8(inst, &mut s, samples)?,
        ClaimId::C9 => c9(inst)?,
        ClaimId::C10 => c10(inst, &mut s, samples)?,
    };
    let info = id.info();
    let failed = out.failed.unwrap_or(out.witness.is_some());
    let status = match info.semantics {
        Semantics::Probe => Status::Recorded,
        Semantics::Assert if failed => Status::Fail,
        Semantics::Assert => Status::Pass,
    };
    Ok(ClaimReport {
        claim: id,
        instance: inst.name.clone(),
        semantics: info.semantics,
        status,
        seed,
        samples,
        checks: out.checks,
        witness: out.witness,
        findings: out.findings,
        note: out.note,
    })
}

fn skipped(id: ClaimId, inst: &Instance, seed: u64, samples: usize, need: Ingredient) -> ClaimReport {
    ClaimReport {
        claim: id,
        instance: inst.name.clone(),
        semantics: id.info().semantics,
        status: Status::Skipped,
        seed,
        samples,
        checks: 0,
        witness: None,
        findings: Vec::new(),
        note: Some(format!("needs {}", need.describe())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub recorded: usize,
    pub skipped: usize,
    pub failed_claims: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub reports: Vec<ClaimReport>,
    pub summary: Summary,
}

impl SuiteReport {
    fn new(seed: u64, samples: usize, reports: Vec<ClaimReport>) -> Self {
        let count = |st: Status| reports.iter().filter(|r| r.status == st).count();
        let failed_claims = reports
            .iter()
            .filter(|r| r.status == Status::Fail)
            .map(|r| format!("{} on {}", r.claim, r.instance))
            .collect();
        let summary = Summary {
            total: reports.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            recorded: count(Status::Recorded),
            skipped: count(Status::Skipped),
            failed_claims,
        };
        SuiteReport {
            seed,
            samples,
            reports,
            summary,
        }
    }

    /// Exit status follows assert claims only.
    pub fn all_asserts_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .reports
            .iter()
            .map(|r| {
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Recorded => "recorded",
                    Status::Skipped => "skipped",
                };
                let detail = if let Some(w) = &r.witness {
                    format!("{}: {} vs {}", w.check, w.lhs, w.rhs)
                } else if !r.findings.is_empty() {
                    let held = r.findings.iter().filter(|f| f.holds).count();
                    format!("{held}/{} relations hold", r.findings.len())
                } else {
                    r.note.clone().unwrap_or_default()
                };
                vec![
                    r.claim.to_string(),
                    r.instance.clone(),
                    status.to_string(),
                    r.checks.to_string(),
                    detail,
                ]
            })
            .collect();
        let mut out = crate::cohomology::align(&["claim", "instance", "status", "checks", "detail"], &rows);
        let s = &self.summary;
        out.push_str(&format!(
            "{} reports: {} pass, {} fail, {} recorded, {} skipped\n",
            s.total, s.passed, s.failed, s.recorded, s.skipped
        ));
        out
    }
}

/// Runs `ids` on every instance.
///
/// With `strict`, a missing ingredient is an error; otherwise the claim is
/// reported as skipped, except that C6 always runs.
pub fn run_suite(
    ids: &[ClaimId],
    instances: &[Instance],
    seed: u64,
    samples: usize,
    strict: bool,
) -> Result<SuiteReport> {
    let jobs: Vec<(&Instance, ClaimId)> = instances
        .iter()
        .flat_map(|inst| ids.iter().map(move |id| (inst, *id)))
        .collect();
    let results: Vec<Result<ClaimReport>> = jobs
        .par_iter()
        .map(|(inst, id)| match missing(inst, *id) {
            Some(need) if !strict => Ok(skipped(*id, inst, seed, samples, need)),
            _ => run_claim(*id, inst, seed, samples),
        })
        .collect();
    let reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new(seed, samples, reports))
}

/// Every claim on every instance, skipping what does not apply.
pub fn run_all(instances: &[Instance], seed: u64, samples: usize) -> SuiteReport {
    run_suite(&ClaimId::ALL, instances, seed, samples, false).expect("non-strict runs do not fail")
}

fn show<R: Ring>(p: &Polynomial<R>) -> String {
    p.to_string()
}

fn c1(inst: &Instance, s: &mut Sampler, samples: usize) -> Outcome {
    let a = &inst.algebra;
    let n = inst.pi.n();
    let mut t = Tally::default();
    for _ in 0..samples {
        let f = s.poly(n);
        let g = s.poly(n);
        let lambda = s.lambda();
        let xi = s.near_point(a, n);
        let (fa, ga) = (prolong_function(&f, a), prolong_function(&g, a));
        let inputs = || vec![format!("f = {f}"), format!("g = {g}"), format!("λ = {}", format_rational(&lambda))];
        t.poly("(f+g)^A = f^A + g^A", inputs, &prolong_function(&(&f + &g), a), &(&fa + &ga));
        t.poly("(λf)^A = λ f^A", inputs, &prolong_function(&f.scale_rational(&lambda), a), &fa.scale_rational(&lambda));
        let fg = &f * &g;
        t.poly("(fg)^A = f^A g^A", inputs, &prolong_function(&fg, a), &(&fa * &ga));
        let (xf, xg) = (xi.eval(&f).unwrap(), xi.eval(&g).unwrap());
        t.element(a, "ξ(fg) = ξ(f) ξ(g)", inputs, &xi.eval(&fg).unwrap(), &a.mul(&xf, &xg).unwrap());
        t.element(a, "ξ(f+g) = ξ(f) + ξ(g)", inputs, &xi.eval(&(&f + &g)).unwrap(), &a.add(&xf, &xg).unwrap());
        let expanded = expand_components(&(&fa * &ga));
        let conv = crate::prolong::component_mul(a, &expand_components(&fa), &expand_components(&ga));
        t.record(expanded == conv, || Witness {
            check: "σ(f^A g^A) = σ(f^A) * σ(g^A)".into(),
            inputs: inputs(),
            lhs: format!("{expanded:?}"),
            rhs: format!("{conv:?}"),
            residual: String::new(),
        });
    }
    t.into()
}

fn c2(inst: &Instance, s: &mut Sampler, samples: usize) -> Outcome {
    let a = &inst.algebra;
    let n = inst.pi.n();
    let mut t = Tally::default();
    for _ in 0..samples {
        let f = s.poly(n);
        let xi = s.near_point(a, n);
        let inputs = || {
            let coords: Vec<String> = xi.coords().iter().map(|c| a.format(c)).collect();
            vec![format!("f = {f}"), format!("ξ = ({})", coords.join(", "))]
        };
        let v = near_point_eval(&f, &xi).unwrap();
        let base = f.eval(&xi.base_point()).unwrap();
        t.element(a, "augmentation(ξ(f)) = f(π_M ξ)", inputs, &AlgElement::new(vec![a.augmentation(&v).unwrap()]), &AlgElement::new(vec![base]));
        let fa = prolong_function(&f, a);
        t.element(a, "f^A(ξ) = ξ(f)", inputs, &xi.eval_a(&fa).unwrap(), &v);
        let comps = expand_components(&fa);
        t.element(a, "Σ σ_γ(f^A)(ξ) e_γ = ξ(f)", inputs, &crate::prolong::eval_components(&comps, &xi).unwrap(), &v);
    }
    t.into()
}

fn c3(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let pro = Prolongation::new(&inst.pi, &inst.algebra)?;
    let n = inst.pi.n();
    let mut t = Tally::default();
    for _ in 0..samples {
        let f = s.poly(n);
        let g = s.poly(n);
        let lhs = pro.bracket(&pro.prolong(&f), &pro.prolong(&g))?;
        let rhs = pro.prolong(&inst.pi.bracket(&f, &g)?);
        t.poly("{f^A, g^A}_A = ({f,g})^A", || vec![format!("f = {f}"), format!("g = {g}")], &lhs, &rhs);
    }
    Ok(t.into())
}

fn c4(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let pro = Prolongation::new(&inst.pi, &inst.algebra)?;
    let alg = &inst.algebra;
    let n = inst.pi.n();
    let br = |x: &APoly, y: &APoly| pro.bracket(x, y);
    let mut t = Tally::default();
    for _ in 0..samples {
        let phi = s.apoly(alg, n);
        let psi = s.apoly(alg, n);
        let chi = s.apoly(alg, n);
        let c = s.element(alg);
        let inputs = || {
            vec![
                format!("φ = {}", show(&phi)),
                format!("ψ = {}", show(&psi)),
                format!("χ = {}", show(&chi)),
                format!("a = {}", alg.format(&c)),
            ]
        };
        let pp = br(&phi, &psi)?;
        t.poly("{aφ, ψ} = a{φ, ψ}", inputs, &br(&phi.scale(&c), &psi)?, &pp.scale(&c));
        t.poly("{φ, aψ} = a{φ, ψ}", inputs, &br(&phi, &psi.scale(&c))?, &pp.scale(&c));
        t.poly("{φ, ψ} = −{ψ, φ}", inputs, &pp, &-br(&psi, &phi)?);
        let leib = &(&br(&phi, &psi)? * &chi) + &(&psi * &br(&phi, &chi)?);
        t.poly("{φ, ψχ} = {φ,ψ}χ + ψ{φ,χ}", inputs, &br(&phi, &(&psi * &chi))?, &leib);
        let (u, v, w) = (
            s.apoly_deg(alg, n, 2),
            s.apoly_deg(alg, n, 2),
            s.apoly_deg(alg, n, 2),
        );
        let jac = pro.structure().jacobi_defect(&u, &v, &w)?;
        t.poly(
            "Jacobi",
            || vec![format!("u = {}", show(&u)), format!("v = {}", show(&v)), format!("w = {}", show(&w))],
            &jac,
            &APoly::zero(alg.clone(), n),
        );
    }
    Ok(t.into())
}

fn c5(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let pro = Prolongation::new(&inst.pi, &inst.algebra)?;
    let alg = &inst.algebra;
    let n = inst.pi.n();
    let mut t = Tally::default();
    for _ in 0..samples {
        let phi = s.apoly(alg, n);
        let psi = s.apoly(alg, n);
        let chi = s.apoly_deg(alg, n, 2);
        let inputs = || vec![format!("φ = {}", show(&phi)), format!("ψ = {}", show(&psi)), format!("χ = {}", show(&chi))];
        t.poly("τ̃_φ(ψ) = {φ, ψ}_A", inputs, &pro.tau_bracket(&phi, &psi)?, &pro.bracket(&phi, &psi)?);
        let prod = pro.tau_tilde(&(&phi * &psi))?.apply(&chi);
        let split = &(&phi * &pro.tau_tilde(&psi)?.apply(&chi)) + &(&psi * &pro.tau_tilde(&phi)?.apply(&chi));
        t.poly("τ̃_{φψ} = φτ̃_ψ + ψτ̃_φ", inputs, &prod, &split);
        let f = s.poly(n);
        let g = s.poly(n);
        t.poly(
            "τ̃_{f^A}(g^A) = ({f,g})^A",
            || vec![format!("f = {f}"), format!("g = {g}")],
            &pro.tau_bracket(&pro.prolong(&f), &pro.prolong(&g))?,
            &pro.prolong(&inst.pi.bracket(&f, &g)?),
        );
    }
    Ok(t.into())
}

fn c6(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let n = inst.pi.n();
    let mut t = Tally::default();
    let mut note = None;
    if crate::cohomology::grading_degree(&inst.pi).is_ok() {
        let scalars = [Scalars::Real, Scalars::Algebra(inst.algebra.clone())];
        for sc in &scalars {
            for mode in SignMode::ALL {
                let spec = ComplexSpec::new(
                    inst.name.clone(),
                    inst.pi.clone(),
                    sc.clone(),
                    0..=inst.p_max(),
                    0..=inst.truncation.weight_max,
                    mode,
                )?;
                let labels = match sc {
                    Scalars::Algebra(a) => Some(a.labels().to_vec()),
                    Scalars::Real => None,
                };
                for res in verify_d_squared(&spec)? {
                    let zero = res.residual.is_zero();
                    t.record(zero, || {
                        let tr = res.residual.triplets();
                        let cell = &tr[0];
                        Witness {
                            check: format!("d∘d = 0 ({} scalars, {mode}, p = {}, weight = {})", sc.label(), res.p, res.weight),
                            inputs: vec![format!("column {}", res.source[cell.col].describe(labels.as_deref()))],
                            lhs: format!("row {} entry {}", res.target[cell.row].describe(labels.as_deref()), format_rational(&cell.value)),
                            rhs: "0".into(),
                            residual: format!("{} nonzero entries", tr.len()),
                        }
                    });
                }
            }
        }
    } else {
        note = Some("inhomogeneous structure: blocks skipped, sampled cochains only".into());
    }
    for k in 0..samples {
        let p = k % n.max(1);
        let om = s.q_multivector(n, p, 3);
        for mode in SignMode::ALL {
            let dd = differential(&inst.pi, &differential(&inst.pi, &om, mode), mode);
            t.record(dd.is_zero(), || Witness {
                check: format!("d(dΩ) = 0 ({mode})"),
                inputs: vec![format!("Ω = {om}")],
                lhs: dd.to_string(),
                rhs: "0".into(),
                residual: dd.to_string(),
            });
        }
    }
    let mut out: Outcome = t.into();
    out.note = note;
    Ok(out)
}

fn prolong_multivector(eta: &Multivector<Rationals>, algebra: &WeilAlgebra) -> Multivector<WeilAlgebra> {
    let mut out = Multivector::zero(algebra.clone(), eta.n(), eta.degree());
    for (idx, c) in eta.components() {
        out.add_component(idx, prolong_function(c, algebra));
    }
    out
}

fn c7(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let pro = Prolongation::new(&inst.pi, &inst.algebra)?;
    let alg = &inst.algebra;
    let n = inst.pi.n();
    let mode = inst.sign_mode;
    let mut t = Tally::default();
    for k in 0..samples {
        let p = k % n;
        let omega = s.a_multivector(alg, n, p, 2);
        let args: Vec<QPoly> = (0..=p).map(|_| s.poly_deg(n, 3)).collect();
        let lhs = ce_formula(
            mode,
            &args,
            APoly::zero(alg.clone(), n),
            |f, v| pro.ad_prolonged(f).expect("matching variables").apply(v),
            |f, g| inst.pi.bracket(f, g).expect("matching variables"),
            |list| {
                let pro_args: Vec<APoly> = list.iter().map(|f| pro.prolong(f)).collect();
                omega.eval(&pro_args).expect("arity matches")
            },
        );
        let lifted: Vec<APoly> = args.iter().map(|f| pro.prolong(f)).collect();
        let rhs = differential(pro.structure(), &omega, mode).eval(&lifted)?;
        t.poly(
            &format!("d̃(Ω∘T^A) = (d̃_A Ω)∘T^A ({mode})"),
            || {
                let mut v = vec![format!("Ω = {omega}")];
                v.extend(args.iter().enumerate().map(|(i, f)| format!("f{} = {f}", i + 1)));
                v
            },
            &lhs,
            &rhs,
        );
    }
    Ok(t.into())
}

fn c8(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let pro = Prolongation::new(&inst.pi, &inst.algebra)?;
    let alg = &inst.algebra;
    let n = inst.pi.n();
    let mut cochain = Tally::default();
    let mut pairings: Vec<((SignMode, SignMode), Tally)> = SignMode::ALL
        .iter()
        .flat_map(|&a| SignMode::ALL.iter().map(move |&r| ((a, r), Tally::default())))
        .collect();
    for k in 0..samples {
        let p = k % n;
        let eta = s.q_multivector(n, p, 2);
        let args: Vec<QPoly> = (0..=p).map(|_| s.poly_deg(n, 3)).collect();
        let eta_a = prolong_multivector(&eta, alg);
        let lifted: Vec<APoly> = args.iter().map(|f| pro.prolong(f)).collect();
        let inputs = || {
            let mut v = vec![format!("η = {eta}")];
            v.extend(args.iter().enumerate().map(|(i, f)| format!("f{} = {f}", i + 1)));
            v
        };
        cochain.poly(
            "η^A(f^A, …) = (η(f, …))^A",
            inputs,
            &eta_a.eval(&lifted[..p])?,
            &pro.prolong(&eta.eval(&args[..p])?),
        );
        for ((ma, mr), tally) in pairings.iter_mut() {
            let lhs = differential(pro.structure(), &eta_a, *ma).eval(&lifted)?;
            let rhs = pro.prolong(&differential(&inst.pi, &eta, *mr).eval(&args)?);
            tally.poly(&format!("d_A(η^A) = (dη)^A (A: {ma}, ℝ: {mr})"), inputs, &lhs, &rhs);
        }
    }
    let mut findings = Vec::new();
    let mut witness = cochain.witness.clone();
    let mut checks = cochain.checks;
    let mut failed = !cochain.ok();
    findings.push(cochain.into_finding("η^A is a cochain on prolonged arguments".into()));
    for ((ma, mr), tally) in pairings {
        checks += tally.checks;
        if ma == mr && !tally.ok() {
            failed = true;
            if witness.is_none() {
                witness = tally.witness.clone();
            }
        }
        let role = if ma == mr { "asserted" } else { "recorded" };
        findings.push(tally.into_finding(format!("chain law, A side {ma}, real side {mr} ({role})")));
    }
    Ok(Outcome {
        checks,
        witness,
        findings,
        note: None,
        failed: Some(failed),
    })
}

fn c9(inst: &Instance) -> Result<Outcome> {
    let cmp = scalar_extension_compare(
        &inst.name,
        &inst.pi,
        &inst.algebra,
        0..=inst.p_max(),
        0..=inst.truncation.weight_max,
        inst.sign_mode,
    )?;
    let mut t = Tally::default();
    for c in &cmp.cells {
        t.record(c.holds, || Witness {
            check: format!("dim_ℝ H_A = {} · dim H at p = {}, weight = {}", cmp.factor, c.p, c.weight),
            inputs: vec![],
            lhs: format!("dim_H {} (rank {})", c.dim_h_algebra, c.rank_algebra),
            rhs: format!("{} · {} (rank {})", cmp.factor, c.dim_h_real, c.rank_real),
            residual: String::new(),
        });
    }
    let mut out: Outcome = t.into();
    out.note = Some(cmp.summary());
    Ok(out)
}

/// `⟨p, F⟩` for an `A`-polynomial in component form.
fn pair_with(p: &LinearForm, comps: &[QPoly]) -> QPoly {
    let mut acc = QPoly::zero(Rationals, comps[0].num_vars());
    for (g, c) in comps.iter().enumerate() {
        let w = &p.coeffs[g];
        if !num_traits::Zero::is_zero(w) {
            acc = &acc + &c.scale_rational(w);
        }
    }
    acc
}

fn c10(inst: &Instance, s: &mut Sampler, samples: usize) -> Result<Outcome> {
    let alg = &inst.algebra;
    let n = inst.pi.n();
    let d = alg.dim();
    let form = inst.p_form.as_ref().expect("checked by the caller");
    let lift: PoissonStructure<Rationals> = p_lift(&inst.pi, alg, form)?;
    let layout = ProlongedCoordinates::new(n, alg);
    let name = |k: usize| layout.name(k);
    let mut pairs: Vec<(QPoly, QPoly)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((QPoly::q_var(n, i), QPoly::q_var(n, j)));
        }
    }
    for _ in 0..samples {
        pairs.push((s.poly_deg(n, 3), s.poly_deg(n, 3)));
    }
    let mut per_gamma: Vec<Tally> = (0..d).map(|_| Tally::default()).collect();
    let mut defining = Tally::default();
    for (f, g) in &pairs {
        let fa = expand_components(&prolong_function(f, alg));
        let ga = expand_components(&prolong_function(g, alg));
        let fg = expand_components(&prolong_function(&inst.pi.bracket(f, g)?, alg));
        let inputs = || vec![format!("f = {f}"), format!("g = {g}")];
        for (gamma, tally) in per_gamma.iter_mut().enumerate() {
            let lhs = lift.bracket(&fa[gamma], &ga[gamma])?;
            let rhs = &fg[gamma];
            tally.record(&lhs == rhs, || Witness {
                check: format!("{{(f^A)_{gamma}, (g^A)_{gamma}}} = ({{f,g}}^A)_{gamma}"),
                inputs: inputs(),
                lhs: lhs.format_with(&name),
                rhs: rhs.format_with(&name),
                residual: (&lhs - rhs).format_with(&name),
            });
        }
        let (a, b) = (s.below(d), s.below(d));
        let mult = |comps: &[QPoly], e: usize| crate::prolong::component_mul(alg, &unit_components(alg, e, comps[0].num_vars()), comps);
        let lhs = lift.bracket(&pair_with(form, &mult(&fa, a)), &pair_with(form, &mult(&ga, b)))?;
        let ab = alg.mul(&alg.basis(a), &alg.basis(b))?;
        let rhs = pair_with(form, &crate::prolong::component_mul(alg, &element_components(&ab, fg[0].num_vars()), &fg));
        defining.record(lhs == rhs, || Witness {
            check: format!("{{⟨p, e{a} f^A⟩, ⟨p, e{b} g^A⟩}} = ⟨p, e{a} e{b} {{f,g}}^A⟩"),
            inputs: inputs(),
            lhs: lhs.format_with(&name),
            rhs: rhs.format_with(&name),
            residual: (&lhs - &rhs).format_with(&name),
        });
    }
    let labels = alg.labels();
    let mut findings: Vec<Finding> = per_gamma
        .into_iter()
        .enumerate()
        .map(|(gamma, t)| {
            t.into_finding(format!(
                "{{(f^A)_γ, (g^A)_γ}}_lift = ({{f,g}}^A)_γ for γ = {} ({})",
                gamma, labels[gamma]
            ))
        })
        .collect();
    findings.push(defining.into_finding("{⟨p,a f^A⟩, ⟨p,b g^A⟩}_lift = ⟨p, ab {f,g}^A⟩".into()));
    let checks = findings.iter().map(|f| f.checks).sum();
    let coeffs: Vec<String> = form.coeffs.iter().map(format_rational).collect();
    Ok(Outcome {
        checks,
        witness: None,
        findings,
        note: Some(format!("p = [{}], lift on {} variables", coeffs.join(", "), layout.num_vars())),
        failed: None,
    })
}

fn unit_components(alg: &WeilAlgebra, e: usize, nvars: usize) -> Vec<QPoly> {
    element_components(&alg.basis(e), nvars)
}

fn element_components(a: &AlgElement, nvars: usize) -> Vec<QPoly> {
    a.coeffs
        .iter()
        .map(|c| QPoly::q_const(nvars, c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{bundled, bundled_all};

    #[test]
    fn ids_parse_and_print() {
        assert_eq!("C7".parse::<ClaimId>().unwrap(), ClaimId::C7);
        assert_eq!(ClaimId::C10.to_string(), "C10");
        assert!(matches!("C99".parse::<ClaimId>(), Err(Error::UnknownClaim(_))));
        assert_eq!(ClaimId::parse_list("C1, C3,C1").unwrap(), vec![ClaimId::C1, ClaimId::C3]);
        assert_eq!(ClaimId::parse_list("all").unwrap().len(), 10);
        for id in ClaimId::ALL {
            assert_eq!(id.info().id, id);
        }
    }

    #[test]
    fn explain_quotes_anchors() {
        assert!(explain("C7").unwrap().contains("Representations τ and τ̃ are isomorphic"));
        assert!(explain("C1").unwrap().contains("(f·g)^A = f^A·g^A"));
        assert!(matches!(explain("C99"), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn c3_passes_on_so3_jet2() {
        let inst = bundled("so3_jet2").unwrap();
        let r = run_claim(ClaimId::C3, &inst, 7, 50).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.checks, 50);
    }

    #[test]
    fn c6_fails_on_counterexample() {
        let inst = bundled("counterexample_dual").unwrap();
        let r = run_claim(ClaimId::C6, &inst, 1, 5).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn c10_records_augmentation_failure() {
        let inst = bundled("symplectic_dual").unwrap();
        let r = run_claim(ClaimId::C10, &inst, 3, 10).unwrap();
        assert_eq!(r.status, Status::Recorded);
        let f0 = &r.findings[0];
        assert!(!f0.holds);
        let w = f0.witness.as_ref().unwrap();
        assert_eq!(w.inputs, vec!["f = x1".to_string(), "g = x2".to_string()]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("0", "1"));
        assert!(r.findings[1].holds);
        assert!(r.findings[2].holds);
    }

    #[test]
    fn missing_ingredients() {
        let mut inst = bundled("symplectic_dual").unwrap();
        inst.p_form = None;
        assert!(matches!(run_claim(ClaimId::C10, &inst, 0, 1), Err(Error::MissingIngredient(_))));
        let bad = bundled("counterexample_dual").unwrap();
        let suite = run_all(&[bad], 0, 3);
        let c6 = suite.reports.iter().find(|r| r.claim == ClaimId::C6).unwrap();
        assert_eq!(c6.status, Status::Fail);
        assert!(suite.reports.iter().any(|r| r.status == Status::Skipped));
        assert!(!suite.all_asserts_pass());
        assert!(suite.summary.failed_claims.iter().any(|c| c.starts_with("C6")));
    }

    #[test]
    fn empty_suite_passes() {
        let suite = run_all(&[], 0, 3);
        assert!(suite.reports.is_empty());
        assert!(suite.all_asserts_pass());
    }

    #[test]
    fn assert_claims_pass_on_valid_bundles() {
        let insts: Vec<Instance> = bundled_all().into_iter().filter(|i| i.is_valid_poisson()).collect();
        let ids = [ClaimId::C1, ClaimId::C2, ClaimId::C4, ClaimId::C5, ClaimId::C7, ClaimId::C8];
        let suite = run_suite(&ids, &insts, 11, 4, true).unwrap();
        for r in &suite.reports {
            assert_eq!(r.status, Status::Pass, "{} on {}: {:?}", r.claim, r.instance, r.witness);
        }
    }

    #[test]
    fn same_mode_pairings_hold_in_c8() {
        let inst = bundled("so3_jet2").unwrap();
        let r = run_claim(ClaimId::C8, &inst, 5, 9).unwrap();
        assert_eq!(r.status, Status::Pass);
        for f in &r.findings {
            if f.relation.contains("asserted") {
                assert!(f.holds, "{}", f.relation);
            }
        }
    }
}
