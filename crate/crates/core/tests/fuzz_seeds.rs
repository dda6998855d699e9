//! Replays the checked-in fuzz seeds through the same entry points and
//! round-trip assertions as the fuzz targets.

use std::path::PathBuf;

use triad::json;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let s = std::fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

/// Seeds must exercise both the accepting and the rejecting paths.
fn both(target: &str, ok: usize, total: usize) {
    assert!(ok > 0 && ok < total, "{target}: {ok} of {total} seeds parse");
}

#[test]
fn algebra_seeds() {
    let s = seeds("parse_algebra");
    let mut ok = 0;
    for (p, body) in &s {
        if let Ok(a) = json::parse_algebra(body, 4) {
            ok += 1;
            let back = json::parse_algebra(&json::algebra_to_string(&a), 4).unwrap();
            assert_eq!(back, a, "{}", p.display());
            let _ = a.check_semi_associative();
        }
    }
    both("parse_algebra", ok, s.len());
}

#[test]
fn lie_seeds() {
    let s = seeds("parse_lie");
    let mut ok = 0;
    for (p, body) in &s {
        if let Ok(l) = json::parse_lie(body, 5) {
            ok += 1;
            assert_eq!(json::parse_lie(&json::lie_to_string(&l), 5).unwrap(), l, "{}", p.display());
            let _ = l.check_filippov();
        }
    }
    assert!(ok > 0);
}

#[test]
fn module_seeds() {
    let s = seeds("parse_double_module");
    let mut ok = 0;
    for (p, body) in &s {
        if let Ok(dm) = json::parse_double_module(body, 4) {
            ok += 1;
            assert_eq!(json::parse_double_module(&json::module_to_string(&dm), 4).unwrap(), dm, "{}", p.display());
            let _ = dm.check();
        }
    }
    both("parse_double_module", ok, s.len());
}

#[test]
fn cocycle_seeds() {
    let s = seeds("parse_cocycle");
    let mut ok = 0;
    for (p, body) in &s {
        if let Ok(c) = json::parse_cocycle(body, 3) {
            ok += 1;
            assert_eq!(json::parse_cocycle(&json::cocycle_to_string(&c), 3).unwrap(), c, "{}", p.display());
            let _ = c.check();
        }
    }
    both("parse_cocycle", ok, s.len());
}

#[test]
fn subspace_seeds() {
    let s = seeds("parse_subspace");
    let mut ok = 0;
    for (_, body) in &s {
        if let Ok(v) = json::parse_subspace(body, 8) {
            ok += 1;
            for b in v.basis_vectors() {
                assert!(v.contains(&b).unwrap());
            }
        }
    }
    both("parse_subspace", ok, s.len());
}

#[test]
fn rational_seeds() {
    let s = seeds("parse_rational");
    let mut ok = 0;
    for (_, body) in &s {
        if let Ok(q) = json::parse_rational(body) {
            ok += 1;
            assert_eq!(json::parse_rational(&q.to_string()).unwrap(), q);
        }
    }
    both("parse_rational", ok, s.len());
}
