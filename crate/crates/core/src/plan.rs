//! Chooses and runs a construction for given `(n, k)`.
//!
//! `Method::Auto` runs a small table over `n' = k..=n` (fixed `k`) of the
//! largest system each witness-producing rule can deliver, then builds the
//! winner. Rules that only bound the size without a witness are ignored here.

use std::fmt;
use std::str::FromStr;

use crate::bounds::binomial;
use crate::construct::{
    construct_2k1, construct_2k2, construct_3k1, construct_k2, extend_by_one, latin_lift,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::model::{verify_sperner, ClassSet, Partition, PartitionSystem, MAX_ELEMENTS};

/// Systems above this size are not materialised (verification is quadratic).
pub const MAX_PARTITIONS: u128 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    K2,
    Dev2k1,
    Dev2k2,
    Dev3k1,
    LatinLift,
    Extend,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "auto" => Method::Auto,
            "k2" => Method::K2,
            "dev-2k1" => Method::Dev2k1,
            "dev-2k2" => Method::Dev2k2,
            "dev-3k1" => Method::Dev3k1,
            "latin-lift" => Method::LatinLift,
            "extend" => Method::Extend,
            other => return Err(format!("unknown method {other:?}")),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::K2 => "k2",
            Method::Dev2k1 => "dev-2k1",
            Method::Dev2k2 => "dev-2k2",
            Method::Dev3k1 => "dev-3k1",
            Method::LatinLift => "latin-lift",
            Method::Extend => "extend",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    K2,
    Dev2k1,
    Dev2k2,
    Dev3k1,
    Fixture(&'static str),
    LatinLift,
    Extend,
    Single,
}

/// Size each direct rule yields at `(n, k)`, if it applies.
fn direct_options(n: usize, k: usize) -> Vec<(u128, Step)> {
    let mut out = Vec::new();
    if k == 2 && n % 2 == 1 && n >= 3 {
        let l = (n - 1) / 2;
        out.push((binomial(n - 1, l - 1), Step::K2));
    }
    if n == 2 * k + 1 && k.is_multiple_of(2) && k >= 2 {
        out.push((2 * k as u128, Step::Dev2k1));
    }
    if n == 2 * k + 2 && k >= 3 {
        out.push((2 * k as u128 + 1, Step::Dev2k2));
    }
    if k >= 4 && n == 3 * k - 1 {
        out.push((3 * k as u128 - 1, Step::Dev3k1));
    }
    for f in fixtures::for_params(n, k) {
        out.push((f.size as u128, Step::Fixture(f.name)));
    }
    out.push((1, Step::Single));
    out
}

fn plan_table(n: usize, k: usize) -> Vec<(u128, Step)> {
    let mut table: Vec<(u128, Step)> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m < k {
            table.push((0, Step::Single));
            continue;
        }
        let mut best = direct_options(m, k)
            .into_iter()
            .filter(|(v, _)| *v <= MAX_PARTITIONS)
            .max_by_key(|(v, _)| *v)
            .expect("single partition always applies");
        let latin = k as u128 * table[m - k].0;
        if latin > best.0 && latin <= MAX_PARTITIONS {
            best = (latin, Step::LatinLift);
        }
        if table[m - 1].0 > best.0 {
            best = (table[m - 1].0, Step::Extend);
        }
        table.push(best);
    }
    table
}

/// One k-partition with class sizes as equal as possible.
pub fn single_partition(n: usize, k: usize) -> Result<PartitionSystem> {
    if k == 0 || n < k {
        return Err(Error::NoPartition { n, k });
    }
    let mut classes = vec![ClassSet::EMPTY; k];
    for x in 0..n {
        classes[x % k].insert(x);
    }
    Ok(PartitionSystem::new(n, k, vec![Partition::new(n, classes)?]).with_name("single partition"))
}

fn build(
    n: usize,
    k: usize,
    table: &[(u128, Step)],
    trail: &mut Vec<String>,
) -> Result<PartitionSystem> {
    let (size, step) = table[n];
    trail.push(format!("({n},{k}): {size} via {step:?}"));
    match step {
        Step::K2 => construct_k2(n),
        Step::Dev2k1 => construct_2k1(k),
        Step::Dev2k2 => construct_2k2(k),
        Step::Dev3k1 => construct_3k1(k),
        Step::Fixture(name) => fixtures::system(name),
        Step::Single => single_partition(n, k),
        Step::LatinLift => latin_lift(&build(n - k, k, table, trail)?),
        Step::Extend => extend_by_one(&build(n - 1, k, table, trail)?),
    }
}

/// Largest system the auto planner can build for `(n, k)` and the steps taken.
pub fn construct_auto(n: usize, k: usize) -> Result<(PartitionSystem, Vec<String>)> {
    if k == 0 || n < k {
        return Err(Error::NoPartition { n, k });
    }
    if n > MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "n = {n} exceeds {MAX_ELEMENTS}"
        )));
    }
    let table = plan_table(n, k);
    let mut trail = Vec::new();
    let system = build(n, k, &table, &mut trail)?;
    Ok((system, trail))
}

/// Runs `method` for `(n, k)`. The result is always verified.
pub fn construct(n: usize, k: usize, method: Method) -> Result<(PartitionSystem, Vec<String>)> {
    let mismatch = |why: &str| {
        Err(Error::InvalidParameters(format!(
            "method {method} needs {why}; got n = {n}, k = {k}"
        )))
    };
    let (system, trail) = match method {
        Method::Auto => construct_auto(n, k)?,
        Method::K2 => {
            if k != 2 || n.is_multiple_of(2) {
                return mismatch("k = 2 and odd n");
            }
            let l = (n - 1) / 2;
            if binomial(n - 1, l - 1) > MAX_PARTITIONS {
                return Err(Error::InvalidParameters(format!(
                    "system would exceed {MAX_PARTITIONS} partitions"
                )));
            }
            (construct_k2(n)?, vec![])
        }
        Method::Dev2k1 => {
            if n != 2 * k + 1 {
                return mismatch("n = 2k+1");
            }
            (construct_2k1(k)?, vec![])
        }
        Method::Dev2k2 => {
            if n != 2 * k + 2 {
                return mismatch("n = 2k+2");
            }
            (construct_2k2(k)?, vec![])
        }
        Method::Dev3k1 => {
            if n + 1 != 3 * k {
                return mismatch("n = 3k-1");
            }
            (construct_3k1(k)?, vec![])
        }
        Method::LatinLift => {
            if n < 2 * k {
                return mismatch("n >= 2k");
            }
            let (base, mut trail) = construct_auto(n - k, k)?;
            if (base.len() * k) as u128 > MAX_PARTITIONS {
                return Err(Error::InvalidParameters(format!(
                    "system would exceed {MAX_PARTITIONS} partitions"
                )));
            }
            trail.insert(0, format!("({n},{k}): latin lift"));
            (latin_lift(&base)?, trail)
        }
        Method::Extend => {
            if n <= k {
                return mismatch("n > k");
            }
            let (base, mut trail) = construct_auto(n - 1, k)?;
            trail.insert(0, format!("({n},{k}): extend by one"));
            (extend_by_one(&base)?, trail)
        }
    };
    let report = verify_sperner(&system);
    if !report.valid {
        return Err(Error::ConstructionFailed(
            report.describe(&system).join("; "),
        ));
    }
    Ok((system, trail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_prefers_largest() {
        assert_eq!(construct_auto(17, 8).unwrap().0.len(), 16);
        assert_eq!(construct_auto(11, 4).unwrap().0.len(), 11);
        assert_eq!(construct_auto(8, 3).unwrap().0.len(), 8);
        // (8,4) lifts a single partition to 4, then (12,4) lifts that to 16
        assert_eq!(construct_auto(12, 4).unwrap().0.len(), 16);
        let (s, trail) = construct_auto(16, 4).unwrap();
        assert_eq!(s.len(), 64);
        assert!(trail[0].contains("LatinLift"));
    }

    #[test]
    fn method_mismatch() {
        assert!(construct(10, 4, Method::Dev2k1).is_err());
        assert!(construct(9, 3, Method::K2).is_err());
        assert!(construct(5, 3, Method::LatinLift).is_err());
        assert_eq!(construct(10, 4, Method::Dev2k2).unwrap().0.len(), 9);
        assert_eq!(construct(10, 4, Method::Extend).unwrap().0.len(), 8);
    }

    #[test]
    fn single_partition_is_almost_uniform() {
        let s = single_partition(7, 3).unwrap();
        assert_eq!(s.partitions()[0].class_sizes(), vec![2, 2, 3]);
        assert!(single_partition(2, 3).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [
            "auto",
            "k2",
            "dev-2k1",
            "dev-2k2",
            "dev-3k1",
            "latin-lift",
            "extend",
        ] {
            assert_eq!(m.parse::<Method>().unwrap().to_string(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }
}
