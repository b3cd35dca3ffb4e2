//! Fans shipped with the library.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::io::FanFile;

const ENTRIES: &[(&str, &str)] = &[
    ("p1", include_str!("../catalog/p1.json")),
    ("p2", include_str!("../catalog/p2.json")),
    ("p3", include_str!("../catalog/p3.json")),
    ("p1xp1", include_str!("../catalog/p1xp1.json")),
    ("hirzebruch_0", include_str!("../catalog/hirzebruch_0.json")),
    ("hirzebruch_1", include_str!("../catalog/hirzebruch_1.json")),
    ("hirzebruch_2", include_str!("../catalog/hirzebruch_2.json")),
    ("hirzebruch_3", include_str!("../catalog/hirzebruch_3.json")),
    ("bl_p2", include_str!("../catalog/bl_p2.json")),
    // complete but not projective
    ("oda_84", include_str!("../catalog/oda_84.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

/// Whether the catalog entry comes from a polytope.
pub fn is_projective(name: &str) -> bool {
    name != "oda_84"
}

pub fn source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn file(name: &str) -> Result<FanFile> {
    let src = source(name).ok_or_else(|| Error::input("catalog", format!("unknown catalog fan '{name}'")))?;
    FanFile::parse(src)
}

pub fn fan(name: &str) -> Result<Fan> {
    file(name)?.to_fan()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_smooth_and_complete() {
        for name in names() {
            let rep = fan(name).unwrap().validate();
            assert!(rep.is_valid(), "{name}: {:?}", rep.diagnostics);
        }
    }

    #[test]
    fn euler_relation() {
        // sum_k (-1)^k f_k = (-1)^n for a complete fan (the sphere S^{n-1} plus the zero cone)
        for name in names() {
            let f = fan(name).unwrap();
            let faces = f.all_faces();
            let mut by_dim = vec![0i64; f.dim() + 1];
            for c in &faces {
                by_dim[c.dim()] += 1;
            }
            assert_eq!(by_dim.iter().sum::<i64>() as usize, faces.len());
            let euler: i64 = by_dim.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -c }).sum();
            assert_eq!(euler, if f.dim().is_multiple_of(2) { 1 } else { -1 }, "{name}");
        }
    }
}
