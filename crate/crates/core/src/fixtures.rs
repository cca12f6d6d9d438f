//! Reference systems, kept in their original labels.

use crate::error::{Error, Result};
use crate::format::parse_text;
use crate::model::PartitionSystem;

pub struct Fixture {
    pub name: &'static str,
    pub n: usize,
    pub k: usize,
    pub size: usize,
    pub caption: &'static str,
    pub source: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "fig1",
        n: 7,
        k: 3,
        size: 5,
        caption: "3-partition system on {0,...,6} with 5 partitions",
        source: include_str!("../fixtures/fig1.txt"),
    },
    Fixture {
        name: "fig-17-8",
        n: 17,
        k: 8,
        size: 16,
        caption: "8-partition system on a 17-set with 16 partitions (developed)",
        source: include_str!("../fixtures/fig-17-8.txt"),
    },
    Fixture {
        name: "fig-9-4",
        n: 9,
        k: 4,
        size: 8,
        caption: "4-partition system on a 9-set with 8 partitions",
        source: include_str!("../fixtures/fig-9-4.txt"),
    },
    Fixture {
        name: "fig-11-4",
        n: 11,
        k: 4,
        size: 11,
        caption: "4-partition system on an 11-set with 11 partitions (developed)",
        source: include_str!("../fixtures/fig-11-4.txt"),
    },
    Fixture {
        name: "fig-8-3",
        n: 8,
        k: 3,
        size: 8,
        caption: "3-partition system on an 8-set with 8 partitions",
        source: include_str!("../fixtures/fig-8-3.txt"),
    },
    Fixture {
        name: "fig-10-4",
        n: 10,
        k: 4,
        size: 10,
        caption: "4-partition system on a 10-set with 10 partitions, not almost uniform",
        source: include_str!("../fixtures/fig-10-4.txt"),
    },
];

pub fn get(name: &str) -> Result<&'static Fixture> {
    FIXTURES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// Parses the named fixture into 0-based form.
pub fn system(name: &str) -> Result<PartitionSystem> {
    let fixture = get(name)?;
    Ok(parse_text(fixture.source)?.with_name(fixture.name))
}

/// Fixtures matching `(n, k)`.
pub fn for_params(n: usize, k: usize) -> impl Iterator<Item = &'static Fixture> {
    FIXTURES.iter().filter(move |f| f.n == n && f.k == k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shapes_match_sources() {
        for f in FIXTURES {
            let s = system(f.name).unwrap();
            assert_eq!((s.n(), s.k(), s.len()), (f.n, f.k, f.size), "{}", f.name);
        }
        assert!(matches!(system("fig-99"), Err(Error::UnknownFixture(_))));
    }
}
