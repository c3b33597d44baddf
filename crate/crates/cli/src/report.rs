//! Command results and their text, JSON and CSV renderings.

use rankin::denssub::SearchCertificate;
use rankin::invariants::{AsymptoticBounds, BoundInterval, BoundTable, DecimalInterval};
use rankin::lattices::IntegralLattice;
use rankin::linalg::IntMatrix;
use rankin::paperbench::{self, CheckResult, RmRow};
use rankin::ExactRadical;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// An exact value with its human form and a decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Number {
    pub exact: ExactRadical,
    pub form: String,
    pub decimal: String,
}

impl Number {
    pub fn new(value: &ExactRadical, precision: usize) -> Self {
        Self { exact: value.clone(), form: value.to_exact_string(), decimal: trim_zeros(value.to_decimal(precision)) }
    }

    fn text(&self) -> String {
        if self.form == self.decimal {
            self.form.clone()
        } else {
            format!("{} ≈ {}", self.form, self.decimal)
        }
    }
}

/// `2.00000` -> `2`, `1.50000` -> `1.5`; exponent suffixes are kept.
fn trim_zeros(s: String) -> String {
    let (mantissa, exp) = s.split_at(s.find(['e', 'E']).unwrap_or(s.len()));
    if !mantissa.contains('.') {
        return s;
    }
    let m = mantissa.trim_end_matches('0').trim_end_matches('.');
    format!("{m}{exp}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub source: String,
    pub n: usize,
    pub q: Option<u32>,
    /// `|C|` as a decimal string.
    pub code_size: Option<String>,
    pub basis: IntMatrix,
    pub gram: IntMatrix,
    pub det: String,
    pub even: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DlReport {
    pub source: String,
    pub n: usize,
    pub l: usize,
    pub d_l: u64,
    pub certificate: SearchCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub source: String,
    pub n: usize,
    pub l: usize,
    pub d_l: u64,
    pub det: String,
    pub gamma: Number,
    pub certificate: SearchCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPrimeReport {
    pub source: String,
    pub n: usize,
    pub q: u32,
    pub l: usize,
    pub self_dual: bool,
    pub shortcut_used: bool,
    pub d_l: u64,
    /// `d_l` of `Λ_{C⊥} = q·Λ*`.
    pub d_l_dual: u64,
    pub gamma_prime: Number,
    pub certificate: SearchCertificate,
    pub dual_certificate: Option<SearchCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub cell: String,
    pub n: usize,
    pub l: usize,
    pub lower: Number,
    pub upper: Option<Number>,
    pub lower_provenance: Vec<String>,
    pub upper_provenance: Vec<String>,
}

impl BoundRow {
    pub fn new(b: &BoundInterval, precision: usize) -> Self {
        Self {
            cell: b.cell(),
            n: b.n,
            l: b.l,
            lower: Number::new(&b.lower, precision),
            upper: b.upper.as_ref().map(|u| Number::new(u, precision)),
            lower_provenance: b.lower_provenance.clone(),
            upper_provenance: b.upper_provenance.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n_max: usize,
    pub rules: Vec<String>,
    pub passes: usize,
    pub cap_hit: bool,
    pub rows: Vec<BoundRow>,
}

impl BoundsReport {
    pub fn new(table: &BoundTable, precision: usize) -> Self {
        Self {
            n_max: table.n_max,
            rules: table.rules.clone(),
            passes: table.passes,
            cap_hit: table.cap_hit,
            rows: table.cells.iter().map(|c| BoundRow::new(c, precision)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RmTableReport {
    pub rows: Vec<RmRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub results: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Build(BuildReport),
    Dl(DlReport),
    Gamma(GammaReport),
    GammaPrime(GammaPrimeReport),
    Bounds(BoundsReport),
    RmTable(RmTableReport),
    Verify(VerifyReport),
    Asymptotic(AsymptoticBounds),
}

impl BuildReport {
    pub fn new(source: String, lattice: &IntegralLattice, q: Option<u32>, code_size: Option<String>) -> Self {
        Self {
            source,
            n: lattice.dimension(),
            q,
            code_size,
            basis: lattice.basis().clone(),
            gram: lattice.gram().clone(),
            det: lattice.det_gram().to_string(),
            even: lattice.is_even(),
        }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Text => render_text(report),
        Format::Csv => render_csv(report),
    }
}

/// Pretty JSON with a trailing newline; parsing and re-rendering is the
/// identity.
pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

fn matrix_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn matrix_cell(m: &IntMatrix) -> String {
    m.iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn certificate_text(c: &SearchCertificate) -> String {
    let mut s = String::new();
    s += "witness rows:\n";
    for r in &c.witness.rows {
        s += &format!("  {}\n", r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
    }
    s += &format!("witness gram: {}\n", matrix_text(&c.witness.gram));
    s += &format!("enumeration radius: {}\n", c.per_vector_bound);
    s += &format!("candidates: {}\n", c.candidates_examined);
    s += &format!("escalation confirmed: {}\n", if c.confirmed_by_escalation { "yes" } else { "no" });
    s
}

fn interval_text(lower: &Number, upper: Option<&Number>) -> (String, String) {
    let u = upper.map_or("inf".to_string(), |u| u.form.clone());
    let ud = upper.map_or("inf".to_string(), |u| u.decimal.clone());
    (format!("[{}, {u}]", lower.form), format!("[{}, {ud}]", lower.decimal))
}

fn render_text(report: &Report) -> String {
    match report {
        Report::Build(b) => {
            let mut s = format!("source: {}\nn: {}\n", b.source, b.n);
            if let Some(q) = b.q {
                s += &format!("q: {q}\n");
            }
            if let Some(size) = &b.code_size {
                s += &format!("|C|: {size}\n");
            }
            s += &format!("det: {}\neven: {}\nbasis (HNF):\n", b.det, if b.even { "yes" } else { "no" });
            for r in &b.basis {
                s += &format!("  {}\n", r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
            }
            s
        }
        Report::Dl(d) => {
            format!("source: {}\nd_{}: {}\n{}", d.source, d.l, d.d_l, certificate_text(&d.certificate))
        }
        Report::Gamma(g) => format!(
            "source: {}\nd_{}: {}\ndet: {}\ngamma_{{{},{}}}: {}\n{}",
            g.source,
            g.l,
            g.d_l,
            g.det,
            g.n,
            g.l,
            g.gamma.text(),
            certificate_text(&g.certificate)
        ),
        Report::GammaPrime(g) => {
            let mut s = format!(
                "source: {}\nself-dual: {}{}\nd_{l}: {}\nd_{l}(dual): {}\ngamma'_{{{},{l}}}: {}\n",
                g.source,
                if g.self_dual { "yes" } else { "no" },
                if g.shortcut_used { " (shortcut)" } else { "" },
                g.d_l,
                g.d_l_dual,
                g.n,
                g.gamma_prime.text(),
                l = g.l,
            );
            s += &certificate_text(&g.certificate);
            if let Some(c) = &g.dual_certificate {
                for line in certificate_text(c).lines() {
                    s += &format!("dual {line}\n");
                }
            }
            s
        }
        Report::Bounds(b) => {
            let mut s = format!(
                "rules: {}\npasses: {}{}\n",
                b.rules.join(", "),
                b.passes,
                if b.cap_hit { " (cap hit)" } else { "" }
            );
            for r in &b.rows {
                let (exact, dec) = interval_text(&r.lower, r.upper.as_ref());
                s += &format!("{}: {exact} ≈ {dec}\n", r.cell);
                if !r.lower_provenance.is_empty() {
                    s += &format!("    lower: {}\n", r.lower_provenance.join(" <- "));
                }
                if !r.upper_provenance.is_empty() {
                    s += &format!("    upper: {}\n", r.upper_provenance.join(" <- "));
                }
            }
            s
        }
        Report::RmTable(t) => {
            let mut s = "m  r  k   det(Λ(B_{r,m}))  det(Λ_R)  (2^(2^m-k))^2\n".to_string();
            for r in &t.rows {
                s += &format!(
                    "{}  {}  {:<3} {:<16} {:<9} {}\n",
                    r.m, r.r, r.k, r.det_generator_gram, r.det_code_lattice, r.det_formula
                );
            }
            s
        }
        Report::Verify(v) => paperbench::render_text(&v.results),
        Report::Asymptotic(a) => {
            let mut s = format!("gamma_{{{},{}}} bounds ({} significant digits)\n", 2 * a.k, a.k, a.digits);
            let line = |name: &str, d: &DecimalInterval| {
                format!("{name}: [{}, {}]\n    lower: {}\n    upper: {}\n", d.lower, d.upper, d.lower_source, d.upper_source)
            };
            s += &line("classical", &a.classical);
            if let Some(i) = &a.improved {
                s += &line("improved", i);
            }
            s += &line("best", &a.best);
            for n in &a.notes {
                s += &format!("note: {n}\n");
            }
            s
        }
    }
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut put = |rec: &[String]| w.write_record(rec).expect("in-memory write");
    let num = |n: &Number| [n.exact.numer().to_string(), n.exact.denom().to_string(), n.exact.root().to_string(), n.decimal.clone()];
    match report {
        Report::Build(b) => {
            put(&["source", "n", "q", "code_size", "det", "even", "basis"].map(String::from));
            put(&[
                b.source.clone(),
                b.n.to_string(),
                b.q.map_or(String::new(), |q| q.to_string()),
                b.code_size.clone().unwrap_or_default(),
                b.det.clone(),
                b.even.to_string(),
                matrix_cell(&b.basis),
            ]);
        }
        Report::Dl(d) => {
            put(&["source", "n", "l", "d_l", "witness", "radius", "candidates", "confirmed"].map(String::from));
            let c = &d.certificate;
            put(&[
                d.source.clone(),
                d.n.to_string(),
                d.l.to_string(),
                d.d_l.to_string(),
                matrix_cell(&c.witness.rows),
                c.per_vector_bound.to_string(),
                c.candidates_examined.to_string(),
                c.confirmed_by_escalation.to_string(),
            ]);
        }
        Report::Gamma(g) => {
            put(&["source", "n", "l", "d_l", "det", "num", "den", "root", "decimal", "witness"].map(String::from));
            let mut rec = vec![g.source.clone(), g.n.to_string(), g.l.to_string(), g.d_l.to_string(), g.det.clone()];
            rec.extend(num(&g.gamma));
            rec.push(matrix_cell(&g.certificate.witness.rows));
            put(&rec);
        }
        Report::GammaPrime(g) => {
            put(&["source", "n", "q", "l", "self_dual", "d_l", "d_l_dual", "num", "den", "root", "decimal"].map(String::from));
            let mut rec = vec![
                g.source.clone(),
                g.n.to_string(),
                g.q.to_string(),
                g.l.to_string(),
                g.self_dual.to_string(),
                g.d_l.to_string(),
                g.d_l_dual.to_string(),
            ];
            rec.extend(num(&g.gamma_prime));
            put(&rec);
        }
        Report::Bounds(b) => {
            put(&[
                "cell", "n", "l", "lower_num", "lower_den", "lower_root", "lower_decimal", "upper_num", "upper_den",
                "upper_root", "upper_decimal", "lower_provenance", "upper_provenance",
            ]
            .map(String::from));
            for r in &b.rows {
                let mut rec = vec![r.cell.clone(), r.n.to_string(), r.l.to_string()];
                rec.extend(num(&r.lower));
                match &r.upper {
                    Some(u) => rec.extend(num(u)),
                    None => rec.extend([String::new(), String::new(), String::new(), "inf".into()]),
                }
                rec.push(r.lower_provenance.join(" <- "));
                rec.push(r.upper_provenance.join(" <- "));
                put(&rec);
            }
        }
        Report::RmTable(t) => {
            put(&["m", "r", "k", "det_generator_gram", "det_code_lattice", "det_formula"].map(String::from));
            for r in &t.rows {
                put(&[
                    r.m.to_string(),
                    r.r.to_string(),
                    r.k.to_string(),
                    r.det_generator_gram.to_string(),
                    r.det_code_lattice.to_string(),
                    r.det_formula.to_string(),
                ]);
            }
        }
        Report::Verify(v) => {
            put(&["check_id", "status", "runtime_ms", "title", "note"].map(String::from));
            for r in &v.results {
                let status = serde_json::to_value(r.status).expect("serializable");
                put(&[
                    r.check_id.clone(),
                    status.as_str().unwrap_or_default().to_string(),
                    r.runtime_ms.to_string(),
                    r.title.clone(),
                    r.note.clone().unwrap_or_default(),
                ]);
            }
        }
        Report::Asymptotic(a) => {
            put(&["k", "bound", "lower", "upper", "lower_source", "upper_source"].map(String::from));
            let mut row = |name: &str, d: &DecimalInterval| {
                put(&[
                    a.k.to_string(),
                    name.to_string(),
                    d.lower.clone(),
                    d.upper.clone(),
                    d.lower_source.clone(),
                    d.upper_source.clone(),
                ])
            };
            row("classical", &a.classical);
            if let Some(i) = &a.improved {
                row("improved", i);
            }
            row("best", &a.best);
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
