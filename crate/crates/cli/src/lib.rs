//! Job files, the analysis pipeline and its JSON report.
//!
//! A job names the mode, the variables, `f` and the deformation
//! polynomials `g_j`. Every rational in a report is a `"p/q"` string.

use serde::{Deserialize, Serialize};

use brieskorn::connection::{
    build_connection, gauge_normalize, reconstruct_c_from_b0, spectrum, verify_integrability,
    ConnectionData, IntegrabilityReport, ResidualSource,
};
use brieskorn::duality::{
    check_t_symmetry, orthonormalize, residue_pairing, Orthonormal, TSymmetryReport,
};
use brieskorn::frobgate::{check_conditions, suggest_deformation, ConditionReport};
use brieskorn::jacobi::{milnor_number, Config, JacobianSystem, WeightCertificate};
use brieskorn::matrix::ParamMatrix;
use brieskorn::newton::{
    build_polyhedron, is_commode, CommodeVerdict, Nondegeneracy, SubdiagramReport,
};
use brieskorn::polyring::{
    parse_poly_with, ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational, VarNames,
};
use brieskorn::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Exit code for a pipeline error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        e if e.is_hypothesis_violation() => EXIT_HYPOTHESIS,
        _ => EXIT_USAGE,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variables {
    #[serde(default)]
    pub u: Vec<String>,
    #[serde(default)]
    pub x: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Flags {
    pub assume_nondegenerate: bool,
    pub gc_include_r0: bool,
    pub gb_budget: u64,
    pub face_budget: u64,
}

impl Default for Flags {
    fn default() -> Self {
        let cfg = Config::default();
        Flags {
            assume_nondegenerate: false,
            gc_include_r0: true,
            gb_budget: cfg.gb_budget,
            face_budget: cfg.face_budget,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub mode: Mode,
    pub n: usize,
    #[serde(default)]
    pub variables: Option<Variables>,
    pub f: String,
    #[serde(default)]
    pub deformation: Vec<String>,
    #[serde(default)]
    pub flags: Flags,
}

impl Job {
    pub fn from_json(text: &str) -> Result<Job> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("job file: {e}")))
    }

    pub fn names(&self) -> Result<VarNames> {
        let r = self.deformation.len();
        let d = VarNames::default_for(self.n, r);
        let v = self.variables.clone().unwrap_or_default();
        let u = if v.u.is_empty() { d.u } else { v.u };
        let x = if v.x.is_empty() { d.x } else { v.x };
        if u.len() != self.n || x.len() != r {
            return Err(Error::Invalid(format!(
                "expected {} variable names and {r} parameter names, got {} and {}",
                self.n,
                u.len(),
                x.len()
            )));
        }
        VarNames::new(u, x)
    }

    pub fn config(&self) -> Config {
        Config {
            gb_budget: self.flags.gb_budget,
            face_budget: self.flags.face_budget,
            assume_nondegenerate: self.flags.assume_nondegenerate,
        }
    }

    /// `f` and the `g_j`, parameter-free.
    pub fn polynomials(&self) -> Result<(LaurentPoly, Vec<LaurentPoly>)> {
        let names = self.names()?;
        let plain = VarNames {
            u: names.u.clone(),
            x: Vec::new(),
        };
        let f = parse_poly_with(&self.f, &plain, self.mode)?;
        let g = self
            .deformation
            .iter()
            .map(|s| parse_poly_with(s, &plain, self.mode))
            .collect::<Result<_>>()?;
        Ok((f, g))
    }

    /// A polynomial in `u` and the parameters.
    pub fn parse_with_params(&self, text: &str) -> Result<LaurentPoly> {
        parse_poly_with(text, &self.names()?, self.mode)
    }

    pub fn system(&self) -> Result<JacobianSystem> {
        let (f, g) = self.polynomials()?;
        JacobianSystem::new(&f, &g, &self.config())
    }
}

type Matrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisEntry {
    pub monomial: String,
    pub exponent: Vec<i32>,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    pub source: String,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeEntry {
    pub p: Matrix,
    pub inverse: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionEntry {
    pub b0: Matrix,
    pub binf: Matrix,
    pub c: Vec<Matrix>,
    pub birkhoff_ok: bool,
    pub residuals: Vec<ResidualEntry>,
    /// Present when the gauge change is not the identity.
    pub gauge: Option<GaugeEntry>,
    /// Largest x-degree of the `θ⁰` part before and after the gauge change.
    pub a0_degree: Option<u32>,
    pub b0_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationEntry {
    pub relation: String,
    pub indices: Vec<usize>,
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityEntry {
    pub holds: bool,
    pub checked: usize,
    pub residuals: Vec<RelationEntry>,
    /// `C` rebuilt from `B₀` and `B_∞` equals the computed `C`.
    pub reconstruction_matches: Option<bool>,
    pub reconstruction_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingEntry {
    pub s: Option<Matrix>,
    pub socle: Option<String>,
    pub normalization: Option<String>,
    pub weight_violations: Vec<(usize, usize)>,
    /// Columns are the orthonormal basis in monomial coordinates.
    pub orthonormal_change: Option<Matrix>,
    pub obstruction: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TSymmetryEntry {
    /// `monomial` or `orthonormal`.
    pub basis: String,
    pub b0: bool,
    pub binf: bool,
    pub c: Vec<bool>,
    pub residuals: Vec<(String, Matrix)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub mode: Mode,
    pub n: usize,
    pub r: usize,
    pub variables: Variables,
    pub f: String,
    pub deformation: Vec<String>,
    pub mu: usize,
    pub newton_number: u64,
    pub commode: CommodeVerdict,
    pub nondegenerate: Nondegeneracy,
    pub subdiagram: Vec<SubdiagramReport>,
    pub basis: Vec<BasisEntry>,
    pub spectrum: Vec<String>,
    /// Sorted diagonal of `B_∞`, present only for Birkhoff solutions.
    pub binf_spectrum: Option<Vec<String>>,
    pub connection: ConnectionEntry,
    pub integrability: IntegrabilityEntry,
    pub pairing: PairingEntry,
    pub t_symmetry: Option<TSymmetryEntry>,
    pub conditions: ConditionReport,
    pub suggested_deformation: Outcome<Vec<String>>,
}

/// A value or the reason it is missing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Unavailable(String),
}

fn qs(q: &Rational) -> String {
    q.to_string()
}

fn mat(m: &ParamMatrix, names: &VarNames) -> Matrix {
    m.to_strings(names)
}

fn qmat(a: &[Vec<Rational>]) -> Matrix {
    a.iter().map(|row| row.iter().map(qs).collect()).collect()
}

fn coords(v: &[ParamCoeff], names: &VarNames) -> Vec<String> {
    v.iter().map(|c| c.to_string_with(names)).collect()
}

fn monomial(e: &ExponentVec, names: &VarNames) -> String {
    e.to_string_with(names)
}

fn basis_entries(sys: &JacobianSystem, names: &VarNames) -> Vec<BasisEntry> {
    let b = sys.basis();
    (0..b.mu())
        .map(|k| BasisEntry {
            monomial: monomial(&b.monomials[k], names),
            exponent: b.monomials[k].0.clone(),
            weight: qs(&b.weights[k]),
        })
        .collect()
}

fn residual_label(s: &ResidualSource, names: &VarNames) -> String {
    match s {
        ResidualSource::Theta { column, power } => {
            format!("theta^{power} part of F*m{}", column + 1)
        }
        ResidualSource::Param {
            param,
            column,
            power,
        } => {
            format!(
                "theta^{power} part of -g{}*m{} (d/d{})",
                param + 1,
                column + 1,
                names.x[*param]
            )
        }
        ResidualSource::NonConstantBinf => "B_inf depends on the parameters".into(),
        ResidualSource::NonzeroC0 { param } => format!("C0 for {} is nonzero", names.x[*param]),
    }
}

fn connection_entry(pre: &ConnectionData, d: &ConnectionData, names: &VarNames) -> ConnectionEntry {
    ConnectionEntry {
        b0: mat(&d.b0, names),
        binf: mat(&d.binf, names),
        c: d.c.iter().map(|m| mat(m, names)).collect(),
        birkhoff_ok: d.birkhoff_ok,
        residuals: d
            .residuals
            .iter()
            .map(|r| ResidualEntry {
                source: residual_label(&r.source, names),
                coords: coords(&r.coords, names),
            })
            .collect(),
        gauge: d
            .gauge
            .as_ref()
            .filter(|g| !g.is_identity())
            .map(|g| GaugeEntry {
                p: mat(&g.p, names),
                inverse: mat(&g.inverse, names),
            }),
        a0_degree: pre.b0.max_param_degree(),
        b0_degree: d.b0.max_param_degree(),
    }
}

fn integrability_entry(
    d: &ConnectionData,
    rep: &IntegrabilityReport,
    names: &VarNames,
) -> IntegrabilityEntry {
    let (reconstruction_matches, reconstruction_error) = if d.r == 0 {
        (None, None)
    } else {
        match reconstruct_c_from_b0(&d.b0, &d.binf) {
            Ok(c) => (Some(c == d.c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    IntegrabilityEntry {
        holds: rep.holds(),
        checked: rep.checked,
        residuals: rep
            .residuals
            .iter()
            .map(|r| RelationEntry {
                relation: r.relation.to_string(),
                indices: r.indices.clone(),
                residual: mat(&r.residual, names),
            })
            .collect(),
        reconstruction_matches,
        reconstruction_error,
    }
}

fn t_entry(basis: &str, t: &TSymmetryReport, names: &VarNames) -> TSymmetryEntry {
    TSymmetryEntry {
        basis: basis.into(),
        b0: t.b0,
        binf: t.binf,
        c: t.c.clone(),
        residuals: t
            .residuals
            .iter()
            .map(|(s, m)| (s.clone(), mat(m, names)))
            .collect(),
    }
}

fn pairing_and_symmetry(
    sys: &JacobianSystem,
    d: &ConnectionData,
    names: &VarNames,
) -> (PairingEntry, Option<TSymmetryEntry>) {
    let mut entry = PairingEntry {
        s: None,
        socle: None,
        normalization: None,
        weight_violations: Vec::new(),
        orthonormal_change: None,
        obstruction: None,
        error: None,
    };
    let p = match residue_pairing(sys) {
        Ok(p) => p,
        Err(e) => {
            entry.error = Some(e.to_string());
            return (entry, None);
        }
    };
    entry.s = Some(qmat(&p.s));
    entry.socle = Some(monomial(&sys.basis().monomials[p.socle], names));
    entry.normalization = Some(qs(&p.normalization));
    entry.weight_violations = p.weight_violations.clone();
    if p.is_antidiagonal_identity() {
        return (
            entry,
            Some(t_entry("monomial", &check_t_symmetry(d), names)),
        );
    }
    match orthonormalize(sys.basis(), &p) {
        Ok(Orthonormal::Change(q)) => {
            entry.orthonormal_change = Some(qmat(&q));
            match d.change_basis(&q) {
                Ok(dq) => (
                    entry,
                    Some(t_entry("orthonormal", &check_t_symmetry(&dq), names)),
                ),
                Err(e) => {
                    entry.error = Some(e.to_string());
                    (entry, None)
                }
            }
        }
        Ok(Orthonormal::Obstructed { weight, diagonal }) => {
            let diag: Vec<String> = diagonal.iter().map(qs).collect();
            entry.obstruction = Some(format!(
                "weight {weight} block diagonalizes to [{}]",
                diag.join(", ")
            ));
            (entry, None)
        }
        Err(e) => {
            entry.error = Some(e.to_string());
            (entry, None)
        }
    }
}

/// The full pipeline.
pub fn run_analyze(job: &Job) -> Result<Report> {
    let names = job.names()?;
    let (f, g) = job.polynomials()?;
    let commode = is_commode(&f)?;
    if !commode.commode {
        return Err(Error::NotCommode(commode.diagnostic.unwrap_or_default()));
    }
    let newton_number = build_polyhedron(&f)?.newton_number()?;
    let sys = JacobianSystem::new(&f, &g, &job.config())?;
    let pre = build_connection(&sys)?;
    let d = gauge_normalize(&pre)?;
    let integrability = integrability_entry(&d, &verify_integrability(&d), &names);
    let (pairing, t_symmetry) = pairing_and_symmetry(&sys, &d, &names);
    let conditions = check_conditions(&sys, &g, job.flags.gc_include_r0)?;
    let suggested_deformation = match suggest_deformation(&sys, job.flags.gc_include_r0) {
        Ok(v) => Outcome::Ok(v.iter().map(|e| monomial(e, &names)).collect()),
        Err(e) => Outcome::Unavailable(e.to_string()),
    };
    let mut weights = sys.basis().weights.clone();
    weights.sort();
    Ok(Report {
        mode: job.mode,
        n: job.n,
        r: g.len(),
        variables: Variables {
            u: names.u.clone(),
            x: names.x.clone(),
        },
        f: f.to_string_with(&names),
        deformation: g.iter().map(|p| p.to_string_with(&names)).collect(),
        mu: sys.mu(),
        newton_number,
        commode,
        nondegenerate: sys.nondegeneracy().clone(),
        subdiagram: sys.subdiagram().to_vec(),
        basis: basis_entries(&sys, &names),
        spectrum: weights.iter().map(qs).collect(),
        binf_spectrum: spectrum(&d).map(|s| s.iter().map(qs).collect()),
        connection: connection_entry(&pre, &d, &names),
        integrability,
        pairing,
        t_symmetry,
        conditions,
        suggested_deformation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    pub mu: usize,
    pub newton_number: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub basis: Vec<BasisEntry>,
    pub spectrum: Vec<String>,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionReport {
    pub basis: Vec<BasisEntry>,
    pub connection: ConnectionEntry,
    pub integrability: IntegrabilityEntry,
    pub spectrum: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub conditions: ConditionReport,
    pub suggested_deformation: Outcome<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivideReport {
    pub h: String,
    pub alpha: Option<String>,
    pub remainder: String,
    pub coordinates: Vec<String>,
    pub cofactors: Vec<String>,
    pub certificates: Vec<WeightCertificate>,
    pub identity_holds: bool,
}

/// `milnor`: the Gröbner dimension next to the Newton number.
pub fn run_milnor(job: &Job) -> Result<MilnorReport> {
    let (f, _) = job.polynomials()?;
    let newton_number = build_polyhedron(&f)?.newton_number()?;
    Ok(MilnorReport {
        mu: milnor_number(&f, &job.config())?,
        newton_number,
    })
}

/// `spectrum`: the adapted basis and its weights.
pub fn run_spectrum(job: &Job) -> Result<SpectrumReport> {
    let names = job.names()?;
    let sys = job.system()?;
    let mut w = sys.basis().weights.clone();
    w.sort();
    Ok(SpectrumReport {
        basis: basis_entries(&sys, &names),
        spectrum: w.iter().map(qs).collect(),
        symmetric: sys.basis().is_spectrum_symmetric(),
    })
}

pub fn run_connection(job: &Job) -> Result<ConnectionReport> {
    let names = job.names()?;
    let sys = job.system()?;
    let pre = build_connection(&sys)?;
    let d = gauge_normalize(&pre)?;
    Ok(ConnectionReport {
        basis: basis_entries(&sys, &names),
        connection: connection_entry(&pre, &d, &names),
        integrability: integrability_entry(&d, &verify_integrability(&d), &names),
        spectrum: spectrum(&d).map(|s| s.iter().map(qs).collect()),
    })
}

pub fn run_check(job: &Job) -> Result<CheckReport> {
    let names = job.names()?;
    let (_, g) = job.polynomials()?;
    let sys = job.system()?;
    Ok(CheckReport {
        conditions: check_conditions(&sys, &g, job.flags.gc_include_r0)?,
        suggested_deformation: match suggest_deformation(&sys, job.flags.gc_include_r0) {
            Ok(v) => Outcome::Ok(v.iter().map(|e| monomial(e, &names)).collect()),
            Err(e) => Outcome::Unavailable(e.to_string()),
        },
    })
}

/// `divide`: `h` may involve the parameters.
pub fn run_divide(job: &Job, h: &str) -> Result<DivideReport> {
    let names = job.names()?;
    let sys = job.system()?;
    let h = job.parse_with_params(h)?;
    let d = sys.divide(&h)?;
    Ok(DivideReport {
        h: h.to_string_with(&names),
        alpha: d.alpha.as_ref().map(qs),
        remainder: sys.from_coordinates(&d.remainder).to_string_with(&names),
        coordinates: coords(&d.remainder, &names),
        cofactors: d
            .cofactors
            .iter()
            .map(|a| a.to_string_with(&names))
            .collect(),
        identity_holds: d.verify(&h, &sys),
        certificates: d.certificates,
    })
}

/// Dispatch by subcommand name.
pub fn run_subcommand(name: &str, job: &Job, h: Option<&str>) -> Result<serde_json::Value> {
    let to_json = |v: std::result::Result<serde_json::Value, serde_json::Error>| {
        v.map_err(|e| Error::Invalid(format!("serialization: {e}")))
    };
    match name {
        "analyze" => to_json(serde_json::to_value(run_analyze(job)?)),
        "milnor" => to_json(serde_json::to_value(run_milnor(job)?)),
        "spectrum" => to_json(serde_json::to_value(run_spectrum(job)?)),
        "connection" => to_json(serde_json::to_value(run_connection(job)?)),
        "check" => to_json(serde_json::to_value(run_check(job)?)),
        "divide" => {
            let h = h.ok_or_else(|| Error::Invalid("divide needs --h <expr>".into()))?;
            to_json(serde_json::to_value(run_divide(job, h)?))
        }
        other => Err(Error::Invalid(format!("unknown subcommand `{other}`"))),
    }
}

/// Machine-readable error object.
pub fn error_json(e: &Error) -> serde_json::Value {
    serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": exit_code(e) } })
}

/// Indented `key: value` rendering of a JSON value.
pub fn render_text(v: &serde_json::Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn render(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|y| y.is_object() || y.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", inline(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v))),
    }
}

fn inline(v: &serde_json::Value) -> String {
    use serde_json::Value;
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}
