//! String-level reference constructions, written without the library, used
//! as oracles by the integration tests.
#![allow(dead_code)]

use std::sync::OnceLock;

/// `D[n]` is `a` exactly when the 2-adic valuation of `n` is even.
pub fn d_letter(n: usize) -> char {
    if n.trailing_zeros().is_multiple_of(2) {
        'a'
    } else {
        'b'
    }
}

const D_LEN: usize = 1 << 22;

/// A long prefix of `D` built letter by letter from the valuation rule.
pub fn d() -> &'static str {
    static D: OnceLock<String> = OnceLock::new();
    D.get_or_init(|| (1..=D_LEN).map(d_letter).collect())
}

pub fn d_prefix(n: usize) -> &'static str {
    &d()[..n]
}

pub fn substitute(w: &str, image: impl Fn(char) -> &'static str) -> String {
    w.chars().map(image).collect()
}

fn sigma(c: char) -> &'static str {
    match c {
        'a' => "ab",
        'b' => "aa",
        _ => unreachable!(),
    }
}

pub fn block(start: char, m: u32) -> String {
    let mut w = start.to_string();
    for _ in 0..m {
        w = substitute(&w, sigma);
    }
    w
}

pub fn block_a(m: u32) -> String {
    block('a', m)
}

pub fn block_b(m: u32) -> String {
    block('b', m)
}

fn without_last(mut w: String) -> String {
    w.pop();
    w
}

pub fn envelope(kind: u8, m: u32) -> String {
    match kind {
        1 => without_last(block_a(m)),
        2 => without_last(block_b(m) + &block_b(m - 1)),
        _ => unreachable!(),
    }
}

pub fn theta(kind: u8, n: usize) -> String {
    let coded: String = d_prefix(n)
        .chars()
        .map(|c| match (kind, c) {
            (1, 'a') => "a",
            (1, 'b') => "bb",
            (2, 'a') => "ab",
            (2, 'b') => "acac",
            _ => unreachable!(),
        })
        .collect();
    coded[..n].to_string()
}

/// Every start (1-indexed) of `pat` in `text`, overlaps included.
pub fn positions(pat: &str, text: &str) -> Vec<usize> {
    let (p, t) = (pat.as_bytes(), text.as_bytes());
    if p.is_empty() || p.len() > t.len() {
        return Vec::new();
    }
    (0..=t.len() - p.len())
        .filter(|&i| &t[i..i + p.len()] == p)
        .map(|i| i + 1)
        .collect()
}

/// The envelope word of least rank containing `w`: `(kind, m, word)`.
pub fn envelope_of(w: &str) -> (u8, u32, String) {
    for m in 1..=24 {
        for kind in [1, 2] {
            let e = envelope(kind, m);
            if e.contains(w) {
                return (kind, m, e);
            }
        }
    }
    panic!("no envelope for {w}");
}

/// First `count + 1` occurrences of `w` in `D`, read from the oracle prefix.
pub fn first_positions(w: &str, count: usize) -> Vec<usize> {
    let mut len = 4096;
    loop {
        let found = positions(w, d_prefix(len));
        if found.len() > count {
            return found[..=count].to_vec();
        }
        assert!(len < D_LEN, "{w}: fewer than {} occurrences", count + 1);
        len = (2 * len).min(D_LEN);
    }
}

/// `(r0, [r_1 .. r_count], [L(w,1) .. L(w,count+1)])`.
pub fn scan_returns(w: &str, count: usize) -> (String, Vec<String>, Vec<usize>) {
    let pos = first_positions(w, count);
    let d = d();
    let r0 = d[..pos[0] - 1].to_string();
    let returns = pos
        .windows(2)
        .map(|p| d[p[0] - 1..p[1] - 1].to_string())
        .collect();
    (r0, returns, pos)
}

/// Distinct factors of `D` of each length up to `len_max`, from a prefix
/// long enough that doubling it adds nothing.
pub fn factors(len_max: usize) -> Vec<String> {
    let collect = |n: usize| {
        let mut set = std::collections::BTreeSet::new();
        let t = d_prefix(n).as_bytes();
        for len in 1..=len_max {
            for w in t.windows(len) {
                set.insert((len, String::from_utf8(w.to_vec()).unwrap()));
            }
        }
        set
    };
    let mut n = 1024.max(64 * len_max);
    let mut current = collect(n);
    loop {
        n *= 2;
        let next = collect(n);
        if next == current {
            return current.into_iter().map(|(_, w)| w).collect();
        }
        current = next;
    }
}
