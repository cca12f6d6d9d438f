//! Exact bounds on `SP(n, k)`, the largest number of partitions in a Sperner
//! k-partition system on an n-set.
//!
//! Every value is an integer computed without floating point. Each bound
//! carries the list of rules that produced it.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;

/// `n = l*k + r` with `0 <= r < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpParams {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub r: usize,
}

impl SpParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidParameters(format!(
                "n and k must be positive, got n = {n}, k = {k}"
            )));
        }
        Ok(SpParams {
            n,
            k,
            l: n / k,
            r: n % k,
        })
    }
}

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `n < k`: no k-partition exists.
    NoPartition,
    /// `k <= n < 2k`: every k-partition has a singleton class, so only one fits.
    SingletonForced,
    /// `k | n`: exactly `C(n-1, n/k - 1)`.
    DivisibleExact,
    /// `k = 2`, `n = 2l+1`: exactly `C(n-1, l-1)`.
    TwoClassExact,
    /// `n = 2k+1`, `k` even: the cap `2k` is attained.
    OddCircleExact,
    /// `SP(7,3) = 5`, by counting.
    SevenThreeExact,
    /// `SP(10,4) = 10`, by counting and computer search.
    TenFourExact,
    /// `C(n,l) / ((k-r) + r(l+1)/(n-l))`, floored.
    RatioBound,
    /// `SP(2k+1, k) <= 2k`.
    OddCircleCap,
    /// `SP(2k+2, k) <= 2k+3` for `k >= 3`.
    EvenPlusTwoCap,
    /// Developed `2k+1` construction, `k` even.
    Rotational2k1,
    /// Developed `2k+2` construction, `k >= 3`.
    Rotational2k2,
    /// Developed `3k-1` construction, `k >= 4`.
    Rotational3k1,
    /// An embedded fixture.
    Fixture(&'static str),
    /// `SP(n-1,k) <= SP(n,k)`.
    Monotone,
    /// `SP(n,k) >= k * SP(n-k,k)`.
    LatinLift,
    /// Any single k-partition is a system.
    SinglePartition,
}

impl Rule {
    pub fn name(&self) -> String {
        match self {
            Rule::NoPartition => "no-partition".into(),
            Rule::SingletonForced => "singleton-forced".into(),
            Rule::DivisibleExact => "divisible-exact".into(),
            Rule::TwoClassExact => "two-class-exact".into(),
            Rule::OddCircleExact => "2k+1-even-exact".into(),
            Rule::SevenThreeExact => "sp-7-3-exact".into(),
            Rule::TenFourExact => "sp-10-4-exact".into(),
            Rule::RatioBound => "ratio-bound".into(),
            Rule::OddCircleCap => "2k+1-cap".into(),
            Rule::EvenPlusTwoCap => "2k+2-cap".into(),
            Rule::Rotational2k1 => "rotational-2k1".into(),
            Rule::Rotational2k2 => "rotational-2k2".into(),
            Rule::Rotational3k1 => "rotational-3k1".into(),
            Rule::Fixture(name) => format!("fixture:{name}"),
            Rule::Monotone => "monotone".into(),
            Rule::LatinLift => "latin-lift".into(),
            Rule::SinglePartition => "single-partition".into(),
        }
    }

    pub fn citation(&self) -> &'static str {
        match self {
            Rule::NoPartition => "no k-partition exists",
            Rule::SingletonForced => "n < 2k forces a singleton class, so at most one partition",
            Rule::DivisibleExact => "k | n: SP = C(n-1, n/k-1)",
            Rule::TwoClassExact => "k = 2, n odd: SP = C(n-1, l-1) (intersecting l-sets)",
            Rule::OddCircleExact => "n = 2k+1, k even: cap 2k met by the developed construction",
            Rule::SevenThreeExact => "SP(7,3) = 5 by counting",
            Rule::TenFourExact => "SP(10,4) = 10 by counting and computer search",
            Rule::RatioBound => "floor(C(n,l) / ((k-r) + r(l+1)/(n-l)))",
            Rule::OddCircleCap => "SP(2k+1,k) <= 2k",
            Rule::EvenPlusTwoCap => "SP(2k+2,k) <= 2k+3 for k >= 3",
            Rule::Rotational2k1 => "developed circle-plus-centre construction, 2k partitions",
            Rule::Rotational2k2 => "developed two-triangle construction, 2k+1 partitions",
            Rule::Rotational3k1 => "developed triangle construction, 3k-1 partitions",
            Rule::Fixture(_) => "embedded fixture",
            Rule::Monotone => "add a fresh element to one class of each partition",
            Rule::LatinLift => "Latin-square lift, k * SP(n-k,k)",
            Rule::SinglePartition => "a single k-partition",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One step of a bound's derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub rule: Rule,
    pub detail: String,
}

impl Provenance {
    fn new(rule: Rule, detail: impl Into<String>) -> Self {
        Provenance {
            rule,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub n: usize,
    pub k: usize,
    pub lower: u128,
    pub upper: u128,
    pub lower_provenance: Vec<Provenance>,
    pub upper_provenance: Vec<Provenance>,
    pub exact: bool,
}

/// `C(n, r)` exactly. Panics only if the result itself exceeds `u128`, which
/// cannot happen for `n <= 128`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    // acc = C(n, i); dividing out gcd(acc, i+1) first keeps every product
    // no larger than C(n, i+1)
    (0..r).fold(1u128, |acc, i| {
        let d = i as u128 + 1;
        let g = gcd(acc, d);
        (acc / g)
            .checked_mul((n - i) as u128 / (d / g))
            .expect("binomial overflow")
    })
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `floor(C(n,l) * (n-l) / ((k-r)(n-l) + r(l+1)))`, or `C(n,l)/k` when `r = 0`.
pub fn mms1_upper(p: SpParams) -> Result<u128> {
    if p.n < p.k {
        return Err(Error::NoPartition { n: p.n, k: p.k });
    }
    let c = binomial(p.n, p.l);
    if p.r == 0 {
        return Ok(c / p.k as u128);
    }
    let rest = (p.n - p.l) as u128;
    let denom = (p.k - p.r) as u128 * rest + (p.r * (p.l + 1)) as u128;
    // floor(c * rest / denom) without forming c * rest
    Ok(c / denom * rest + c % denom * rest / denom)
}

/// The exact value of `SP(n, k)` when one of the known results applies.
pub fn known_exact(p: SpParams) -> Option<(u128, Rule)> {
    let SpParams { n, k, l, r } = p;
    if n < k {
        return Some((0, Rule::NoPartition));
    }
    if n < 2 * k {
        return Some((1, Rule::SingletonForced));
    }
    if r == 0 {
        return Some((binomial(n - 1, l - 1), Rule::DivisibleExact));
    }
    if k == 2 {
        return Some((binomial(n - 1, l - 1), Rule::TwoClassExact));
    }
    if n == 2 * k + 1 && k % 2 == 0 {
        return Some((2 * k as u128, Rule::OddCircleExact));
    }
    match (n, k) {
        (7, 3) => Some((5, Rule::SevenThreeExact)),
        (10, 4) => Some((10, Rule::TenFourExact)),
        _ => None,
    }
}

fn pair(n: usize, k: usize) -> String {
    format!("({n},{k})")
}

/// The smallest known upper bound; the provenance lists every rule reaching it.
pub fn best_upper(p: SpParams) -> (u128, Vec<Provenance>) {
    let SpParams { n, k, .. } = p;
    if n < k {
        return (0, vec![Provenance::new(Rule::NoPartition, pair(n, k))]);
    }
    let mut candidates: Vec<(u128, Provenance)> = Vec::new();
    if let Ok(v) = mms1_upper(p) {
        candidates.push((v, Provenance::new(Rule::RatioBound, format!("{v}"))));
    }
    if n == 2 * k + 1 {
        let v = 2 * k as u128;
        candidates.push((v, Provenance::new(Rule::OddCircleCap, format!("{v}"))));
    }
    if n == 2 * k + 2 && k >= 3 {
        let v = 2 * k as u128 + 3;
        candidates.push((v, Provenance::new(Rule::EvenPlusTwoCap, format!("{v}"))));
    }
    if let Some((v, rule)) = known_exact(p) {
        candidates.push((v, Provenance::new(rule, format!("{v}"))));
    }
    let best = candidates
        .iter()
        .map(|(v, _)| *v)
        .min()
        .expect("ratio bound always applies");
    let provenance = candidates
        .into_iter()
        .filter(|(v, _)| *v == best)
        .map(|(_, prov)| prov)
        .collect();
    (best, provenance)
}

/// Lower-bound facts that hold at `(n, k)` directly, without recursion.
fn direct_lower(n: usize, k: usize) -> Vec<(u128, Provenance)> {
    let mut out = Vec::new();
    let p = SpParams::new(n, k).expect("positive parameters");
    if let Some((v, rule)) = known_exact(p) {
        if v > 0 {
            out.push((v, Provenance::new(rule, format!("{} = {v}", pair(n, k)))));
        }
    }
    if n == 2 * k + 1 && k.is_multiple_of(2) && k >= 6 {
        out.push((
            2 * k as u128,
            Provenance::new(Rule::Rotational2k1, format!("k = {k}")),
        ));
    }
    if n == 2 * k + 2 && k >= 3 {
        out.push((
            2 * k as u128 + 1,
            Provenance::new(Rule::Rotational2k2, format!("k = {k}")),
        ));
    }
    if k >= 4 && n == 3 * k - 1 {
        out.push((
            3 * k as u128 - 1,
            Provenance::new(Rule::Rotational3k1, format!("k = {k}")),
        ));
    }
    for f in fixtures::for_params(n, k) {
        out.push((
            f.size as u128,
            Provenance::new(Rule::Fixture(f.name), format!("{} partitions", f.size)),
        ));
    }
    if n >= k {
        out.push((1, Provenance::new(Rule::SinglePartition, pair(n, k))));
    }
    out
}

#[derive(Clone)]
struct LowerEntry {
    value: u128,
    chain: Vec<Provenance>,
}

/// Best derivable lower bound, by a table over `n' = 1..=n` for fixed `k`.
///
/// At each size the candidates are the direct facts (known exact values,
/// constructions, fixtures, a single partition), monotonicity from `n'-1`,
/// and the Latin lift `k * SP(n'-k)`. Direct facts win ties and are all
/// listed; derived bounds append the chain of the size they came from.
pub fn best_lower(p: SpParams) -> (u128, Vec<Provenance>) {
    let SpParams { n, k, .. } = p;
    if n < k {
        return (0, vec![Provenance::new(Rule::NoPartition, pair(n, k))]);
    }
    let mut table: Vec<LowerEntry> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m < k {
            table.push(LowerEntry {
                value: 0,
                chain: Vec::new(),
            });
            continue;
        }
        let direct = direct_lower(m, k);
        let direct_best = direct.iter().map(|(v, _)| *v).max().unwrap_or(0);
        let mono = table[m - 1].value;
        let latin = k as u128 * table[m - k].value;

        let entry = if direct_best >= mono.max(latin) {
            LowerEntry {
                value: direct_best,
                chain: direct
                    .into_iter()
                    .filter(|(v, _)| *v == direct_best)
                    .map(|(_, prov)| prov)
                    .collect(),
            }
        } else if latin >= mono {
            let mut chain = vec![Provenance::new(
                Rule::LatinLift,
                format!("{k} x {} from {}", table[m - k].value, pair(m - k, k)),
            )];
            chain.extend(table[m - k].chain.iter().cloned());
            LowerEntry {
                value: latin,
                chain,
            }
        } else {
            let mut chain = vec![Provenance::new(
                Rule::Monotone,
                format!("from {}", pair(m - 1, k)),
            )];
            chain.extend(table[m - 1].chain.iter().cloned());
            LowerEntry { value: mono, chain }
        };
        table.push(entry);
    }
    let last = table.pop().expect("table has n+1 rows");
    (last.value, last.chain)
}

pub fn bounds(n: usize, k: usize) -> Result<BoundResult> {
    let p = SpParams::new(n, k)?;
    let (lower, lower_provenance) = best_lower(p);
    let (upper, upper_provenance) = best_upper(p);
    Ok(BoundResult {
        n,
        k,
        lower,
        upper,
        lower_provenance,
        upper_provenance,
        exact: lower == upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, k: usize) -> SpParams {
        SpParams::new(n, k).unwrap()
    }

    #[test]
    fn decomposition() {
        let p = sp(11, 4);
        assert_eq!((p.l, p.r), (2, 3));
        assert!(SpParams::new(3, 0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(
            binomial(128, 64),
            23_951_146_041_928_082_866_135_587_776_380_551_750
        );
        assert_eq!(binomial(127, 63) * 2, binomial(128, 64));
    }

    #[test]
    fn ratio_bound_values() {
        // r = 0: C(6,2)/3 = 5 = C(5,1)
        assert_eq!(mms1_upper(sp(6, 3)).unwrap(), 5);
        assert_eq!(mms1_upper(sp(9, 4)).unwrap(), 10);
        assert_eq!(mms1_upper(sp(7, 2)).unwrap(), 17);
        assert_eq!(mms1_upper(sp(11, 4)).unwrap(), 27);
        assert!(matches!(
            mms1_upper(sp(2, 3)),
            Err(Error::NoPartition { .. })
        ));
    }

    #[test]
    fn known_values() {
        assert_eq!(known_exact(sp(7, 3)).unwrap().0, 5);
        assert_eq!(known_exact(sp(10, 4)).unwrap().0, 10);
        assert_eq!(known_exact(sp(9, 4)).unwrap().0, 8);
        assert_eq!(known_exact(sp(2, 3)), Some((0, Rule::NoPartition)));
        assert_eq!(known_exact(sp(5, 3)), Some((1, Rule::SingletonForced)));
        assert_eq!(known_exact(sp(11, 4)), None);
    }

    #[test]
    fn upper_choices() {
        let (v, prov) = best_upper(sp(9, 4));
        assert_eq!(v, 8);
        assert!(prov.iter().any(|p| p.rule == Rule::OddCircleCap));
        assert_eq!(best_upper(sp(10, 4)).0, 10);
        let (v, prov) = best_upper(sp(11, 4));
        assert_eq!(v, 27);
        assert_eq!(prov[0].rule, Rule::RatioBound);
    }

    #[test]
    fn lower_choices() {
        let (v, prov) = best_lower(sp(11, 4));
        assert_eq!(v, 11);
        assert!(prov.iter().any(|p| p.rule == Rule::Rotational3k1));
        let (v, prov) = best_lower(sp(8, 3));
        assert_eq!(v, 8);
        assert!(prov.iter().any(|p| p.rule == Rule::Fixture("fig-8-3")));
        let (v, _) = best_lower(sp(13, 3));
        assert!(v >= 3 * best_lower(sp(10, 3)).0);
    }

    #[test]
    fn lower_never_exceeds_upper() {
        for n in 1..=24 {
            for k in 1..=n {
                let b = bounds(n, k).unwrap();
                assert!(b.lower <= b.upper, "({n},{k}): {} > {}", b.lower, b.upper);
            }
        }
    }
}
