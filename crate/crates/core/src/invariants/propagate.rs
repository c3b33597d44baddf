//! Fixed-point propagation of exact intervals over the `(kind, n, l)` grid.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{known_facts, Kind};
use crate::error::{Error, Result};
use crate::exact::ExactRadical;

/// Passes before propagation gives up and reports `cap_hit`.
pub const MAX_PASSES: usize = 200;

/// The inequalities between constants. `R2Upper`/`R2Lower` split the two
/// directions of `γ'_{n,l} <= γ_{n,l} <= γ_n^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// `γ'_{n,l} <= γ_{n,l}` and `γ_{n,l} <= γ_n^l`, applied to upper bounds.
    R2Upper,
    /// `γ_{n,l} >= γ'_{n,l}`, applied to lower bounds.
    R2Lower,
    /// `γ_{n,l} = γ_{n,n-l}`, `γ'_{n,l} = γ'_{n,n-l}`.
    R3,
    /// `γ_{n,l} <= γ_{h,l} γ_{n,h}^{l/h}`.
    R4,
    /// `γ_{n,l}^n <= γ_{n-l,l}^{n-l} γ'_{n,l}^{2l}`.
    R5a,
    /// `γ'_{n,2l} <= γ'_{n-l,l}²`.
    R5b,
    /// `γ'_{n,n/2} = γ_{n,n/2}` for even `n`.
    R6,
    /// `γ_{n,l}^{n-2l} <= γ_{n-l,l}^{n-l}` for `n > 2l`.
    R7,
    /// `γ'_{2l+1,1} <= γ'_{l+1,1}²`.
    R8,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::R2Upper,
        Rule::R2Lower,
        Rule::R3,
        Rule::R4,
        Rule::R5a,
        Rule::R5b,
        Rule::R6,
        Rule::R7,
        Rule::R8,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::R2Upper => "2",
            Rule::R2Lower => "2-lower",
            Rule::R3 => "3",
            Rule::R4 => "4",
            Rule::R5a => "5a",
            Rule::R5b => "5b",
            Rule::R6 => "6",
            Rule::R7 => "7",
            Rule::R8 => "8",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}", self.id())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.id() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown rule `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet(BTreeSet<Rule>);

impl RuleSet {
    pub fn all() -> Self {
        Self(Rule::ALL.into_iter().collect())
    }

    /// The rules behind the published intervals for `γ_{5,2}, γ_{7,2},
    /// γ'_{5,2}, γ'_{7,2}`: no rule 4, no rule 5a, and rule 2 only towards
    /// upper bounds.
    pub fn corollaries() -> Self {
        Self::only(&[Rule::R2Upper, Rule::R3, Rule::R5b, Rule::R6, Rule::R7, Rule::R8])
    }

    pub fn only(rules: &[Rule]) -> Self {
        Self(rules.iter().copied().collect())
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.0.contains(&rule)
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.0.iter().copied()
    }
}

impl FromStr for RuleSet {
    type Err = Error;

    /// `all`, `corollaries`, or a comma list of rule ids such as `3,5b,7`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(Self::all()),
            "corollaries" => Ok(Self::corollaries()),
            list => list
                .split(',')
                .map(Rule::from_str)
                .collect::<Result<BTreeSet<_>>>()
                .map(Self),
        }
    }
}

/// Exact bounds on one constant. `upper = None` means unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub kind: Kind,
    pub n: usize,
    pub l: usize,
    pub lower: ExactRadical,
    pub upper: Option<ExactRadical>,
    pub lower_provenance: Vec<String>,
    pub upper_provenance: Vec<String>,
}

impl BoundInterval {
    pub fn exact(kind: Kind, n: usize, l: usize, value: ExactRadical, source: String) -> Self {
        Self {
            kind,
            n,
            l,
            lower: value.clone(),
            upper: Some(value),
            lower_provenance: vec![source.clone()],
            upper_provenance: vec![source],
        }
    }

    pub fn lower_only(kind: Kind, n: usize, l: usize, lower: ExactRadical, source: String) -> Self {
        Self {
            kind,
            n,
            l,
            lower,
            upper: None,
            lower_provenance: vec![source],
            upper_provenance: Vec::new(),
        }
    }

    pub fn cell(&self) -> String {
        cell_name(self.kind, self.n, self.l)
    }

    pub fn is_exact(&self) -> bool {
        self.upper.as_ref() == Some(&self.lower)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &BoundInterval) -> bool {
        let upper_ok = match (&self.upper, &other.upper) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => b <= a,
        };
        other.lower >= self.lower && upper_ok
    }
}

fn cell_name(kind: Kind, n: usize, l: usize) -> String {
    format!("{kind}_{{{n},{l}}}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTable {
    pub n_max: usize,
    pub rules: Vec<String>,
    pub passes: usize,
    pub cap_hit: bool,
    pub cells: Vec<BoundInterval>,
}

impl BoundTable {
    pub fn get(&self, kind: Kind, n: usize, l: usize) -> Option<&BoundInterval> {
        self.cells.iter().find(|c| c.kind == kind && c.n == n && c.l == l)
    }
}

type Key = (Kind, usize, usize);

struct Grid {
    n_max: usize,
    cells: BTreeMap<Key, BoundInterval>,
}

fn chain(inputs: &[&[String]], step: String) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for entry in inputs.iter().flat_map(|c| c.iter()) {
        if !out.contains(entry) {
            out.push(entry.clone());
        }
    }
    if !out.contains(&step) {
        out.push(step);
    }
    out
}

fn pow(x: &ExactRadical, num: i64, den: i64) -> ExactRadical {
    x.pow(&Ratio::new(num, den)).expect("non-negative base")
}

impl Grid {
    fn new(n_max: usize) -> Self {
        let mut cells = BTreeMap::new();
        for kind in [Kind::Rankin, Kind::BergeMartinet] {
            for n in 2..=n_max {
                for l in 1..n {
                    cells.insert(
                        (kind, n, l),
                        BoundInterval::lower_only(kind, n, l, ExactRadical::one(), "trivial: Z^n attains 1".into()),
                    );
                }
            }
        }
        Self { n_max, cells }
    }

    /// Upper bound with its chain; `γ_{m,m} = γ_{m,0} = 1` exactly.
    fn upper(&self, kind: Kind, n: usize, l: usize) -> Option<(ExactRadical, Vec<String>)> {
        if l == 0 || l == n {
            return Some((ExactRadical::one(), Vec::new()));
        }
        let c = self.cells.get(&(kind, n, l))?;
        c.upper.clone().map(|u| (u, c.upper_provenance.clone()))
    }

    fn lower(&self, kind: Kind, n: usize, l: usize) -> Option<(ExactRadical, Vec<String>)> {
        let c = self.cells.get(&(kind, n, l))?;
        Some((c.lower.clone(), c.lower_provenance.clone()))
    }

    fn check(&self, key: Key) -> Result<()> {
        let c = &self.cells[&key];
        if let Some(u) = &c.upper {
            if &c.lower > u {
                return Err(Error::InconsistentBounds {
                    cell: c.cell(),
                    lower: c.lower.to_exact_string(),
                    upper: u.to_exact_string(),
                    lower_provenance: c.lower_provenance.join(" <- "),
                    upper_provenance: c.upper_provenance.join(" <- "),
                });
            }
        }
        Ok(())
    }

    fn tighten_upper(&mut self, key: Key, value: ExactRadical, prov: Vec<String>) -> Result<bool> {
        let Some(c) = self.cells.get_mut(&key) else { return Ok(false) };
        if c.upper.as_ref().is_some_and(|u| &value >= u) {
            return Ok(false);
        }
        c.upper = Some(value);
        c.upper_provenance = prov;
        self.check(key)?;
        Ok(true)
    }

    fn tighten_lower(&mut self, key: Key, value: ExactRadical, prov: Vec<String>) -> Result<bool> {
        let Some(c) = self.cells.get_mut(&key) else { return Ok(false) };
        if value <= c.lower {
            return Ok(false);
        }
        c.lower = value;
        c.lower_provenance = prov;
        self.check(key)?;
        Ok(true)
    }

    /// Copies both bounds of `from` onto `to` (an equality between constants).
    fn transfer(&mut self, from: Key, to: Key, step: &str) -> Result<bool> {
        let mut changed = false;
        if let Some((u, p)) = self.upper(from.0, from.1, from.2) {
            changed |= self.tighten_upper(to, u, chain(&[&p], step.to_string()))?;
        }
        if let Some((v, p)) = self.lower(from.0, from.1, from.2) {
            changed |= self.tighten_lower(to, v, chain(&[&p], step.to_string()))?;
        }
        Ok(changed)
    }

    fn pass(&mut self, rules: &RuleSet) -> Result<bool> {
        use Kind::{BergeMartinet as P, Rankin as R};
        let mut changed = false;
        let keys: Vec<Key> = self.cells.keys().copied().collect();
        for rule in rules.rules() {
            for &(kind, n, l) in &keys {
                match (rule, kind) {
                    (Rule::R2Upper, R) if l > 1 => {
                        if let Some((g, p)) = self.upper(R, n, 1) {
                            let step = format!("{rule}: {} <= {}^{l}", cell_name(R, n, l), cell_name(R, n, 1));
                            changed |= self.tighten_upper((R, n, l), g.powi(l as i64)?, chain(&[&p], step))?;
                        }
                    }
                    (Rule::R2Upper, P) => {
                        if let Some((g, p)) = self.upper(R, n, l) {
                            let step = format!("{rule}: {} <= {}", cell_name(P, n, l), cell_name(R, n, l));
                            changed |= self.tighten_upper((P, n, l), g, chain(&[&p], step))?;
                        }
                    }
                    (Rule::R2Lower, R) => {
                        if let Some((g, p)) = self.lower(P, n, l) {
                            let step = format!("{rule}: {} >= {}", cell_name(R, n, l), cell_name(P, n, l));
                            changed |= self.tighten_lower((R, n, l), g, chain(&[&p], step))?;
                        }
                    }
                    (Rule::R3, _) if n - l != l => {
                        let step = format!("{rule}: {} = {}", cell_name(kind, n, l), cell_name(kind, n, n - l));
                        changed |= self.transfer((kind, n, n - l), (kind, n, l), &step)?;
                    }
                    (Rule::R4, R) => {
                        for h in l + 1..n {
                            let (Some((a, pa)), Some((b, pb))) = (self.upper(R, h, l), self.upper(R, n, h)) else {
                                continue;
                            };
                            let value = a.mul(&pow(&b, l as i64, h as i64));
                            let step = format!(
                                "{rule}: {} <= {} {}^({l}/{h})",
                                cell_name(R, n, l),
                                cell_name(R, h, l),
                                cell_name(R, n, h)
                            );
                            changed |= self.tighten_upper((R, n, l), value, chain(&[&pa, &pb], step))?;
                        }
                    }
                    (Rule::R5a, R) if 2 * l <= n => {
                        let (Some((a, pa)), Some((b, pb))) = (self.upper(R, n - l, l), self.upper(P, n, l)) else {
                            continue;
                        };
                        let prod = pow(&a, (n - l) as i64, 1).mul(&pow(&b, 2 * l as i64, 1));
                        let value = pow(&prod, 1, n as i64);
                        let step = format!(
                            "{rule}: {}^{n} <= {}^{} {}^{}",
                            cell_name(R, n, l),
                            cell_name(R, n - l, l),
                            n - l,
                            cell_name(P, n, l),
                            2 * l
                        );
                        changed |= self.tighten_upper((R, n, l), value, chain(&[&pa, &pb], step))?;
                    }
                    (Rule::R5b, P) if l % 2 == 0 && l < n => {
                        let half = l / 2;
                        if let Some((a, pa)) = self.upper(P, n - half, half) {
                            let step = format!(
                                "{rule}: {} <= {}^2",
                                cell_name(P, n, l),
                                cell_name(P, n - half, half)
                            );
                            changed |= self.tighten_upper((P, n, l), a.powi(2)?, chain(&[&pa], step))?;
                        }
                    }
                    (Rule::R6, _) if 2 * l == n => {
                        let other = if kind == R { P } else { R };
                        let step = format!("{rule}: {} = {}", cell_name(kind, n, l), cell_name(other, n, l));
                        changed |= self.transfer((other, n, l), (kind, n, l), &step)?;
                    }
                    (Rule::R7, R) if n > 2 * l => {
                        if let Some((a, pa)) = self.upper(R, n - l, l) {
                            let value = pow(&a, (n - l) as i64, (n - 2 * l) as i64);
                            let step = format!(
                                "{rule}: {}^{} <= {}^{}",
                                cell_name(R, n, l),
                                n - 2 * l,
                                cell_name(R, n - l, l),
                                n - l
                            );
                            changed |= self.tighten_upper((R, n, l), value, chain(&[&pa], step))?;
                        }
                    }
                    (Rule::R8, P) if l == 1 && n >= 3 && n % 2 == 1 => {
                        let m = (n - 1) / 2;
                        if let Some((a, pa)) = self.upper(P, m + 1, 1) {
                            let step = format!("{rule}: {} <= {}^2", cell_name(P, n, 1), cell_name(P, m + 1, 1));
                            changed |= self.tighten_upper((P, n, 1), a.powi(2)?, chain(&[&pa], step))?;
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(changed)
    }
}

/// Intersects the seeds into the grid (known facts are always included) and
/// applies the enabled rules until no bound moves.
pub fn propagate_bounds(n_max: usize, seeds: &[BoundInterval], rules: &RuleSet) -> Result<BoundTable> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} must be at least 2")));
    }
    let mut grid = Grid::new(n_max);
    let known: Vec<BoundInterval> = known_facts()
        .into_iter()
        .filter(|f| f.n <= n_max)
        .map(|f| {
            let source = match &f.lattice {
                Some(lat) => format!("known: {} = {} ({lat})", cell_name(f.kind, f.n, f.l), f.value.to_exact_string()),
                None => format!("known: {} = {}", cell_name(f.kind, f.n, f.l), f.value.to_exact_string()),
            };
            BoundInterval::exact(f.kind, f.n, f.l, f.value, source)
        })
        .collect();
    for seed in known.iter().chain(seeds) {
        let key = (seed.kind, seed.n, seed.l);
        if seed.n > grid.n_max || !grid.cells.contains_key(&key) {
            continue;
        }
        if let Some(u) = &seed.upper {
            grid.tighten_upper(key, u.clone(), seed.upper_provenance.clone())?;
        }
        grid.tighten_lower(key, seed.lower.clone(), seed.lower_provenance.clone())?;
    }
    let mut passes = 0;
    let mut cap_hit = false;
    loop {
        passes += 1;
        if !grid.pass(rules)? {
            break;
        }
        if passes >= MAX_PASSES {
            cap_hit = true;
            break;
        }
    }
    Ok(BoundTable {
        n_max,
        rules: rules.rules().map(|r| r.id().to_string()).collect(),
        passes,
        cap_hit,
        cells: grid.cells.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rad(num: i64, den: i64, root: u32) -> ExactRadical {
        ExactRadical::from_ratio(num, den, root).unwrap()
    }

    /// The lattice lower bounds, entered by value: `3/4^{2/n}` for `D_n` and
    /// `√3` for the parity-check codes, `n = 5, 7`.
    fn seeds() -> Vec<BoundInterval> {
        vec![
            BoundInterval::lower_only(Kind::Rankin, 5, 2, rad(243, 16, 5), "lattice D5".into()),
            BoundInterval::lower_only(Kind::Rankin, 7, 2, rad(2187, 16, 7), "lattice D7".into()),
            BoundInterval::lower_only(Kind::BergeMartinet, 5, 2, rad(3, 1, 2), "lattice PC5".into()),
            BoundInterval::lower_only(Kind::BergeMartinet, 7, 2, rad(3, 1, 2), "lattice PC7".into()),
        ]
    }

    #[test]
    fn corollary_intervals() {
        let t = propagate_bounds(8, &seeds(), &RuleSet::corollaries()).unwrap();
        assert!(!t.cap_hit);
        let g52 = t.get(Kind::Rankin, 5, 2).unwrap();
        assert_eq!((&g52.lower, g52.upper.as_ref().unwrap()), (&rad(243, 16, 5), &rad(2, 1, 1)));
        assert!(g52.upper_provenance.iter().any(|p| p.starts_with("rule 7")));
        let g72 = t.get(Kind::Rankin, 7, 2).unwrap();
        assert_eq!((&g72.lower, g72.upper.as_ref().unwrap()), (&rad(2187, 16, 7), &rad(32, 1, 3)));
        let p52 = t.get(Kind::BergeMartinet, 5, 2).unwrap();
        assert_eq!((&p52.lower, p52.upper.as_ref().unwrap()), (&rad(3, 1, 2), &rad(2, 1, 1)));
        assert!(p52.upper_provenance.iter().any(|p| p.starts_with("rule 5b")));
        let p72 = t.get(Kind::BergeMartinet, 7, 2).unwrap();
        assert_eq!((&p72.lower, p72.upper.as_ref().unwrap()), (&rad(3, 1, 2), &rad(8, 3, 1)));
        assert!(p72.upper_provenance.iter().any(|p| p.starts_with("rule 5b")));
    }

    #[test]
    fn full_fixed_point_is_inside_corollary_intervals() {
        let cor = propagate_bounds(8, &seeds(), &RuleSet::corollaries()).unwrap();
        let all = propagate_bounds(8, &seeds(), &RuleSet::all()).unwrap();
        assert!(!all.cap_hit);
        for c in &all.cells {
            let outer = cor.get(c.kind, c.n, c.l).unwrap();
            assert!(outer.contains(c), "{}", c.cell());
        }
        let g52 = all.get(Kind::Rankin, 5, 2).unwrap();
        // Rule 2 lower transfer from γ'_{5,2} >= √3; rule 4 with h = 4.
        assert_eq!(g52.lower, rad(3, 1, 2));
        assert_eq!(g52.upper.as_ref().unwrap(), &rad(3, 2, 1).mul(&rad(8, 1, 10)));
    }

    #[test]
    fn rule_two_and_monotonicity_invariants() {
        for rules in [RuleSet::corollaries(), RuleSet::all()] {
            let bare = propagate_bounds(8, &[], &rules).unwrap();
            let seeded = propagate_bounds(8, &seeds(), &rules).unwrap();
            for c in &seeded.cells {
                assert!(bare.get(c.kind, c.n, c.l).unwrap().contains(c));
                if c.kind == Kind::BergeMartinet {
                    let g = seeded.get(Kind::Rankin, c.n, c.l).unwrap();
                    assert!(c.upper.as_ref().unwrap() <= g.upper.as_ref().unwrap());
                }
            }
        }
    }

    #[test]
    fn known_values_survive_propagation() {
        let t = propagate_bounds(8, &[], &RuleSet::all()).unwrap();
        for f in known_facts() {
            let c = t.get(f.kind, f.n, f.l).unwrap();
            assert!(c.is_exact() && c.lower == f.value, "{}", c.cell());
            // Duality fills the mirrored cell.
            let m = t.get(f.kind, f.n, f.n - f.l).unwrap();
            assert_eq!(m.lower, f.value);
        }
    }

    #[test]
    fn inconsistent_seed_is_reported() {
        let bad = vec![BoundInterval::lower_only(Kind::Rankin, 5, 2, rad(3, 1, 1), "bogus seed".into())];
        match propagate_bounds(8, &bad, &RuleSet::corollaries()) {
            Err(Error::InconsistentBounds { cell, lower_provenance, upper_provenance, .. }) => {
                assert_eq!(cell, "gamma_{5,2}");
                assert!(lower_provenance.contains("bogus seed"));
                assert!(upper_provenance.contains("rule "));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rule_set_parsing() {
        assert_eq!("all".parse::<RuleSet>().unwrap(), RuleSet::all());
        assert_eq!("2,3,5b,6,7,8".parse::<RuleSet>().unwrap(), RuleSet::corollaries());
        assert!("9".parse::<RuleSet>().is_err());
    }
}
