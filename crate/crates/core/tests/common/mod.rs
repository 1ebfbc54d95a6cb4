//! Oracles and enumerators shared by the integration tests. Nothing here
//! calls the closed-form Witt rule or the excellent recursion of the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use quadpic::QuadraticForm;

pub fn form(p: u32, m: u32) -> QuadraticForm {
    QuadraticForm::real(p, m).unwrap()
}

/// All `(p,m)` with `lo <= p + m <= hi`.
pub fn forms_in(lo: u32, hi: u32) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    for n in lo.max(1)..=hi {
        for p in 0..=n {
            out.push(form(p, n - p));
        }
    }
    out
}

/// Witt index of `(p,m)` over a field of level `s` (`None` = formally real),
/// by repeatedly splitting hyperbolic planes and rewriting `s<1>` as `s<-1>`
/// once the definite part is too long to stay anisotropic.
pub fn witt_oracle(p: u32, m: u32, s: Option<u32>) -> u32 {
    let (mut p, mut m, mut witt) = (p, m, 0);
    loop {
        let h = p.min(m);
        witt += h;
        p -= h;
        m -= h;
        let d = p.max(m);
        match s {
            Some(s) if d > s => {
                if p > m {
                    p -= s;
                    m += s;
                } else {
                    m -= s;
                    p += s;
                }
            }
            _ => return witt,
        }
    }
}

/// Rost summand counts of the anisotropic real quadric of `(p,m)`, read off
/// the Witt profile: `#rost(r) = i_W(level 2^(r-1)) - i_W(level 2^r)`.
pub fn rost_counts_oracle(p: u32, m: u32) -> BTreeMap<u32, i64> {
    let mut out = BTreeMap::new();
    for r in 1..=10u32 {
        let lo = witt_oracle(p, m, Some(1 << (r - 1))) as i64;
        let hi = witt_oracle(p, m, Some(1 << r)) as i64;
        if lo > hi {
            out.insert(r, lo - hi);
        }
    }
    out
}

/// Every flag from `(p,m)` down to a one-dimensional form.
pub fn all_flags(p: u32, m: u32) -> Vec<Vec<QuadraticForm>> {
    if p + m == 1 {
        return vec![vec![form(p, m)]];
    }
    let mut out = Vec::new();
    if p > 0 {
        for mut tail in all_flags(p - 1, m) {
            tail.insert(0, form(p, m));
            out.push(tail);
        }
    }
    if m > 0 {
        for mut tail in all_flags(p, m - 1) {
            tail.insert(0, form(p, m));
            out.push(tail);
        }
    }
    out
}
