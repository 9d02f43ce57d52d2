//! Command-line front end: ideal files in, text or JSON documents out.

mod parse;

use std::fmt::Write as _;
use std::time::Instant;

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::arith::{var_name, Scalar};
use crate::error::{Error, Result};
use crate::gb::{buchberger, GroebnerBasis, TermOrder};
use crate::ore::{op_apply, op_mul, DerMonomial, OreOperator, TruncSeries};
use crate::series::{
    d_radical_check, normal_position_series, solve_series, wronskian_x, DEFAULT_DEGREE_BOUND, DEFAULT_TRUNC,
};
use crate::shape::{
    cyclic_vector, eliminate_dx, gauge_transform, normal_position, normalize_by_shear, role_swap, shape_basis,
    shear_ideal, EliminationMethod, ShapeBasis, ShearParams, DEFAULT_COEFF_RANGE, DEFAULT_CYCLIC_DEGREE,
    DEFAULT_MAX_ATTEMPTS,
};

pub use parse::{infer_nvars, parse_operator, IdealFile};

pub const SCHEMA: &str = "ore-shape/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print the operators in canonical form
    Parse,
    /// Multiply the operators left to right
    Mul,
    /// Apply operators to a series, or the first operator to the solutions of the rest
    Apply,
    /// Reduced left Groebner basis
    Gb,
    /// Quotient dimension and standard monomials
    Dim,
    /// Generator of the elimination ideal in K[Dx]
    Eliminate,
    /// Shape basis {Dy_i - Q_i, P}
    Shape,
    /// Normal position with respect to the main derivation
    CheckNormal,
    /// Search for polynomial relations among the solutions
    CheckDradical,
    /// Apply y <- y + c x to the ideal
    Shear,
    /// Search for a shear that reaches normal position
    Normalize,
    /// Truncated power-series solutions at the origin
    Solve,
    /// Wronskian of the solution basis
    Wronskian,
    /// Shape basis of the annihilator of M(f) for a cyclic vector M
    Gauge,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderChoice {
    Degrevlex,
    Lex,
    Elim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Krylov,
    ElimOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Via {
    Algebraic,
    Series,
    Both,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Monomial order for Groebner bases
    #[arg(long, value_enum, default_value = "degrevlex")]
    pub order: OrderChoice,
    /// Derivation playing the role of Dx (Dx, Dy, Dy1, ..)
    #[arg(long, default_value = "Dx")]
    pub main_var: String,
    /// Truncation order of power series
    #[arg(long, default_value_t = DEFAULT_TRUNC)]
    pub trunc: u32,
    /// Degree bound for D-radical witnesses and cyclic-vector candidates
    #[arg(long)]
    pub degree_bound: Option<u32>,
    /// Seed for randomized searches
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shear vector c1,..,cn applied before the command runs
    #[arg(long, allow_hyphen_values = true)]
    pub shear: Option<String>,
    /// Elimination method for `eliminate`
    #[arg(long, value_enum, default_value = "krylov")]
    pub method: MethodChoice,
    /// Test used by `check-normal`
    #[arg(long, value_enum, default_value = "algebraic")]
    pub via: Via,
    /// Attempt budget for randomized searches
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,
    /// Shear entries are drawn from [-R, R]
    #[arg(long, default_value_t = DEFAULT_COEFF_RANGE)]
    pub coeff_range: i64,
    /// Coefficient expression to expand and apply the operators to (`apply`)
    #[arg(long)]
    pub series: Option<String>,
    /// Cyclic vector for `gauge`; searched for when absent
    #[arg(long)]
    pub cyclic: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: OrderChoice::Degrevlex,
            main_var: "Dx".into(),
            trunc: DEFAULT_TRUNC,
            degree_bound: None,
            seed: 0,
            shear: None,
            method: MethodChoice::Krylov,
            via: Via::Algebraic,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            coeff_range: DEFAULT_COEFF_RANGE,
            series: None,
            cyclic: None,
        }
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::Arity { .. } | Error::InvalidArgument(_) => 2,
        Error::NotZeroDimensional
        | Error::NotNormalPosition { .. }
        | Error::NotCyclic { .. }
        | Error::NonOrdinaryOrigin
        | Error::ZeroIdeal
        | Error::PoleAtOrigin
        | Error::PoleAtPoint
        | Error::NvarsMismatch(..) => 3,
        Error::DegreeCapExceeded { .. } | Error::TruncationTooSmall(_) => 4,
        Error::NormalizationFailed { .. } | Error::CyclicVectorNotFound { .. } => 5,
        Error::DivisionByZero | Error::Internal(_) => 1,
    }
}

/// Index of the main derivation named by `--main-var`.
pub fn main_var_index(name: &str, nvars: usize) -> Result<usize> {
    let bad = || Error::InvalidArgument(format!("--main-var `{name}` is not a derivation of this algebra"));
    let idx = match name {
        "Dx" => 0,
        "Dy" if nvars == 1 => 1,
        _ => {
            let digits = name.strip_prefix("Dy").ok_or_else(bad)?;
            let k: usize = digits.parse().map_err(|_| bad())?;
            if k == 0 || k > nvars {
                return Err(bad());
            }
            k
        }
    };
    Ok(idx)
}

/// Parses `c1,..,cn` into rationals.
pub fn parse_shear(text: &str, nvars: usize) -> Result<ShearParams> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<Scalar>()
                .map_err(|_| Error::InvalidArgument(format!("bad shear entry `{}`", s.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.len() != nvars {
        return Err(Error::InvalidArgument(format!(
            "shear needs {nvars} entries, got {}",
            values.len()
        )));
    }
    Ok(ShearParams::new(values))
}

/// Output of one command run.
#[derive(Debug, Clone)]
pub struct ResultDocument {
    pub command: Command,
    pub nvars: usize,
    pub main_var: String,
    pub input_digest: String,
    pub result: Value,
    pub parse_ms: f64,
    pub compute_ms: f64,
}

impl ResultDocument {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command.name(),
            "nvars": self.nvars,
            "main_var": self.main_var,
            "input_digest": self.input_digest,
            "result": self.result,
            "timings_ms": {
                "parse": self.parse_ms,
                "compute": self.compute_ms,
                "total": self.parse_ms + self.compute_ms,
            },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (main variable {})", self.command.name(), self.main_var);
        render_text(&self.result, 0, &mut out);
        out
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(item, indent + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(item));
                    }
                }
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                let _ = writeln!(out, "{pad}(none)");
            }
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "{pad}-");
                        render_text(item, indent + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}- {}", scalar_text(item));
                    }
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", scalar_text(v));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Per-run state: the algebra size and the relabelling that makes the main
/// derivation index 0.
struct Run<'a> {
    nvars: usize,
    perm: Vec<usize>,
    opts: &'a Options,
}

impl Run<'_> {
    fn op(&self, op: &OreOperator) -> Value {
        Value::String(op.permute_vars(&self.perm).to_string())
    }

    fn ops(&self, ops: &[OreOperator]) -> Value {
        Value::Array(ops.iter().map(|o| self.op(o)).collect())
    }

    fn monomials(&self, ms: &[DerMonomial]) -> Value {
        Value::Array(
            ms.iter()
                .map(|m| Value::String(m.permute(&self.perm).to_string()))
                .collect(),
        )
    }

    fn series(&self, f: &TruncSeries) -> Value {
        Value::String(f.permute_vars(&self.perm).to_string())
    }

    fn term_order(&self) -> TermOrder {
        match self.opts.order {
            OrderChoice::Degrevlex => TermOrder::degrevlex(self.nvars),
            OrderChoice::Lex => TermOrder::lex(self.nvars),
            OrderChoice::Elim => TermOrder::eliminate_dy(self.nvars),
        }
    }

    fn parse_aux(&self, text: &str) -> Result<OreOperator> {
        Ok(parse_operator(text, self.nvars)?.permute_vars(&self.perm))
    }

    fn shear_params(&self) -> Result<Option<ShearParams>> {
        self.opts
            .shear
            .as_deref()
            .map(|s| parse_shear(s, self.nvars))
            .transpose()
    }

    /// Groebner basis of the input, sheared when `--shear` is given.
    fn ideal(&self, ops: &[OreOperator]) -> Result<GroebnerBasis> {
        let gb = buchberger(ops, &self.term_order())?;
        match self.shear_params()? {
            Some(c) => shear_ideal(&gb, &c),
            None => Ok(gb),
        }
    }

    fn shape_payload(&self, sb: &ShapeBasis) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("r".into(), json!(sb.rank()));
        m.insert("P".into(), self.op(sb.p()));
        m.insert("Q".into(), self.ops(sb.q()));
        m.insert("basis".into(), self.ops(&sb.generators()));
        m
    }

    fn dispatch(&self, cmd: Command, ops: &[OreOperator]) -> Result<Value> {
        let opts = self.opts;
        Ok(match cmd {
            Command::Parse => json!({ "operators": self.ops(ops) }),
            Command::Mul => {
                let product = ops[1..].iter().fold(ops[0].clone(), |acc, o| op_mul(&acc, o));
                json!({ "factors": self.ops(ops), "product": self.op(&product) })
            }
            Command::Apply => self.apply(ops)?,
            Command::Gb => {
                let gb = self.ideal(ops)?;
                json!({
                    "order": gb.order().name(),
                    "basis": self.ops(gb.gens()),
                    "zero_dimensional": gb.is_zero_dimensional(),
                })
            }
            Command::Dim => {
                let gb = self.ideal(ops)?;
                match gb.quotient_basis() {
                    Ok(b) => json!({
                        "zero_dimensional": true,
                        "r": b.len(),
                        "standard_monomials": self.monomials(b),
                    }),
                    Err(_) => json!({ "zero_dimensional": false, "r": null, "standard_monomials": null }),
                }
            }
            Command::Eliminate => {
                let gb = self.ideal(ops)?;
                let (method, name) = match opts.method {
                    MethodChoice::Krylov => (EliminationMethod::Krylov, "krylov"),
                    MethodChoice::ElimOrder => (EliminationMethod::ElimOrder, "elim-order"),
                };
                let p = eliminate_dx(&gb, method)?;
                json!({
                    "method": name,
                    "P": self.op(&p),
                    "ord_P": p.order(),
                    "r": gb.dimension(),
                })
            }
            Command::Shape => Value::Object(self.shape_payload(&shape_basis(&self.ideal(ops)?)?)),
            Command::CheckNormal => {
                let gb = self.ideal(ops)?;
                let r = gb.quotient_basis()?.len();
                match opts.via {
                    Via::Algebraic => json!({ "via": "algebraic", "r": r, "normal_position": normal_position(&gb)? }),
                    Via::Series => json!({
                        "via": "series",
                        "r": r,
                        "trunc": opts.trunc,
                        "normal_position": normal_position_series(&gb, opts.trunc)?,
                    }),
                    Via::Both => {
                        let algebraic = normal_position(&gb)?;
                        let series = normal_position_series(&gb, opts.trunc)?;
                        let mut m = Map::new();
                        m.insert("via".into(), json!("both"));
                        m.insert("r".into(), json!(r));
                        m.insert("trunc".into(), json!(opts.trunc));
                        m.insert("normal_position".into(), json!(algebraic));
                        m.insert("algebraic".into(), json!(algebraic));
                        m.insert("series".into(), json!(series));
                        if algebraic != series {
                            m.insert(
                                "diagnostic".into(),
                                json!("series test disagrees with ord(P) = r; raise --trunc"),
                            );
                        }
                        Value::Object(m)
                    }
                }
            }
            Command::CheckDradical => {
                let gb = self.ideal(ops)?;
                let d = opts.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND);
                let v = d_radical_check(&gb, d, opts.trunc)?;
                let witness = v.witness().map(|w| {
                    Value::Array(
                        w.iter()
                            .map(|p| Value::String(p.permute_vars(&self.perm).to_string()))
                            .collect(),
                    )
                });
                json!({
                    "verdict": v.tag(),
                    "witness": witness,
                    "degree_bound": d,
                    "trunc": opts.trunc,
                })
            }
            Command::Shear => {
                let c = self
                    .shear_params()?
                    .ok_or_else(|| Error::InvalidArgument("`shear` needs --shear c1,..,cn".into()))?;
                let gb = self.ideal(ops)?;
                json!({
                    "c": c.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "basis": self.ops(gb.gens()),
                    "r": gb.dimension(),
                })
            }
            Command::Normalize => {
                let gb = self.ideal(ops)?;
                let (c, sheared) = normalize_by_shear(&gb, opts.seed, opts.max_attempts, opts.coeff_range)?;
                json!({
                    "c": c.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "basis": self.ops(sheared.gens()),
                    "P": self.op(&eliminate_dx(&sheared, EliminationMethod::Krylov)?),
                })
            }
            Command::Solve => {
                let gb = self.ideal(ops)?;
                let sb = solve_series(&gb, opts.trunc)?;
                json!({
                    "r": sb.rank(),
                    "trunc": opts.trunc,
                    "standard_monomials": self.monomials(sb.standard_monomials()),
                    "members": sb.members().iter().map(|f| self.series(f)).collect::<Vec<_>>(),
                })
            }
            Command::Wronskian => {
                let gb = self.ideal(ops)?;
                let sb = solve_series(&gb, opts.trunc)?;
                if sb.rank() == 0 {
                    json!({ "r": 0, "wronskian": "1", "nonzero": true })
                } else {
                    let w = wronskian_x(sb.members())?;
                    json!({
                        "r": sb.rank(),
                        "wronskian": self.series(&w),
                        "order": w.order(),
                        "nonzero": !w.is_zero(),
                    })
                }
            }
            Command::Gauge => {
                let gb = self.ideal(ops)?;
                let m = match &opts.cyclic {
                    Some(text) => self.parse_aux(text)?,
                    None => cyclic_vector(
                        &gb,
                        opts.seed,
                        opts.degree_bound.unwrap_or(DEFAULT_CYCLIC_DEGREE),
                        opts.max_attempts,
                    )?,
                };
                let sb = gauge_transform(&gb, &m)?;
                let mut payload = Map::new();
                payload.insert("M".into(), self.op(&m));
                payload.extend(self.shape_payload(&sb));
                Value::Object(payload)
            }
        })
    }

    fn apply(&self, ops: &[OreOperator]) -> Result<Value> {
        let n = self.opts.trunc;
        if let Some(text) = &self.opts.series {
            let f = self
                .parse_aux(text)?
                .as_coeff()
                .ok_or_else(|| Error::InvalidArgument("--series must be a coefficient expression".into()))?;
            let s = TruncSeries::from_ratfunc(&f, n).map_err(|_| Error::PoleAtOrigin)?;
            let results = ops
                .iter()
                .map(|o| Ok(json!({ "operator": self.op(o), "result": self.series(&op_apply(o, &s)?) })))
                .collect::<Result<Vec<_>>>()?;
            return Ok(json!({ "series": self.series(&s), "results": results }));
        }
        if ops.len() < 2 {
            return Err(Error::InvalidArgument(
                "`apply` needs --series or an operator followed by an ideal".into(),
            ));
        }
        let gb = self.ideal(&ops[1..])?;
        let sb = solve_series(&gb, n)?;
        let results = sb
            .members()
            .iter()
            .map(|f| op_apply(&ops[0], f).map(|g| self.series(&g)))
            .collect::<Result<Vec<_>>>()?;
        Ok(json!({ "operator": self.op(&ops[0]), "results": results }))
    }
}

/// Parses `input` as an ideal file and runs `cmd` on it.
pub fn run_command(cmd: Command, opts: &Options, input: &str) -> Result<ResultDocument> {
    let start = Instant::now();
    let file = IdealFile::parse(input)?;
    let nvars = file.nvars;
    let k = main_var_index(&opts.main_var, nvars)?;
    let run = Run {
        nvars,
        perm: role_swap(nvars, k),
        opts,
    };
    let ops: Vec<OreOperator> = file.operators.iter().map(|o| o.permute_vars(&run.perm)).collect();
    let parse_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let result = run.dispatch(cmd, &ops)?;
    let compute_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ResultDocument {
        command: cmd,
        nvars,
        main_var: format!("D{}", var_name(nvars, k)),
        input_digest: hex::encode(Sha256::digest(input.as_bytes())),
        result,
        parse_ms,
        compute_ms,
    })
}
