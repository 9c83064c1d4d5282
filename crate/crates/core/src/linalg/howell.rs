//! Howell normal form over `Z/N`.
//!
//! The form is reached column by column: rows below the pivot are merged into it
//! with unimodular 2x2 gcd transforms (or plainly eliminated when some row has a
//! unit entry), the pivot is scaled by a unit to a divisor `g` of `N`, entries
//! above it are reduced into `[0, g)`, and the annihilator multiple `(N/g)·row`
//! is fed back as an extra row. That last step is what makes the row span
//! saturated, so two matrices have the same form iff they have the same span.

use crate::arith::{gcd, inv_mod, mulmod, reduce_signed, submod, xgcd};

#[derive(Clone, Debug)]
pub(crate) struct Howell {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
    /// `rows = transform · input` (mod N), when requested.
    pub transform: Option<Vec<Vec<u64>>>,
}

fn scale(row: &mut [u64], c: u64, n: u64) {
    for x in row.iter_mut() {
        *x = mulmod(*x, c, n);
    }
}

/// `target -= c * source`
fn sub_multiple(target: &mut [u64], source: &[u64], c: u64, n: u64) {
    if c == 0 {
        return;
    }
    for (t, &s) in target.iter_mut().zip(source) {
        if s != 0 {
            *t = submod(*t, mulmod(c, s, n), n);
        }
    }
}

/// `(a, b) <- (s a + t b, u a - v b)`
fn combine(a: &mut [u64], b: &mut [u64], s: u64, t: u64, u: u64, v: u64, n: u64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xa, yb) = (*x as u128, *y as u128);
        let nn = n as u128;
        let new_a = (s as u128 * xa + t as u128 * yb) % nn;
        let new_b = (u as u128 * xa + (nn - v as u128 % nn) * yb) % nn;
        *x = new_a as u64;
        *y = new_b as u64;
    }
}

/// A unit `w` of `Z/n` with `w·a ≡ gcd(a, n)`.
fn normalizing_unit(a: u64, n: u64) -> u64 {
    let g = gcd(a, n);
    let m = n / g;
    let w0 = inv_mod((a / g) % m, m).expect("a/g is a unit mod n/g");
    (0..g)
        .map(|k| w0 + k * m)
        .find(|&w| gcd(w, n) == 1)
        .expect("a unit lift always exists")
}

pub(crate) fn howell(n: u64, ncols: usize, input: Vec<Vec<u64>>, track: bool) -> Howell {
    let mut rows: Vec<Vec<u64>> = input
        .into_iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            r.into_iter().map(|x| x % n).collect()
        })
        .collect();
    let m0 = rows.len();
    let mut tr: Option<Vec<Vec<u64>>> = track.then(|| {
        (0..m0)
            .map(|i| {
                let mut e = vec![0; m0];
                e[i] = 1 % n;
                e
            })
            .collect()
    });
    let mut pivots = Vec::new();
    let mut pr = 0usize;

    for col in 0..ncols {
        if pr >= rows.len() {
            break;
        }
        let unit_row = (pr..rows.len()).find(|&i| rows[i][col] != 0 && gcd(rows[i][col], n) == 1);
        if let Some(i) = unit_row {
            rows.swap(pr, i);
            if let Some(t) = tr.as_mut() {
                t.swap(pr, i);
            }
            let inv = inv_mod(rows[pr][col], n).unwrap();
            scale(&mut rows[pr], inv, n);
            if let Some(t) = tr.as_mut() {
                scale(&mut t[pr], inv, n);
            }
            let (head, tail) = rows.split_at_mut(pr + 1);
            let pivot_row = &head[pr];
            for (off, r) in tail.iter_mut().enumerate() {
                let f = r[col];
                if f != 0 {
                    sub_multiple(r, pivot_row, f, n);
                    if let Some(t) = tr.as_mut() {
                        let (th, tt) = t.split_at_mut(pr + 1);
                        sub_multiple(&mut tt[off], &th[pr], f, n);
                    }
                }
            }
        } else {
            for i in pr + 1..rows.len() {
                if rows[i][col] == 0 {
                    continue;
                }
                if rows[pr][col] == 0 {
                    rows.swap(pr, i);
                    if let Some(t) = tr.as_mut() {
                        t.swap(pr, i);
                    }
                    continue;
                }
                let (a, b) = (rows[pr][col], rows[i][col]);
                let (g, s, t) = xgcd(a, b);
                let (s, t) = (reduce_signed(s, n), reduce_signed(t, n));
                let (u, v) = (b / g, a / g);
                let (head, tail) = rows.split_at_mut(i);
                combine(&mut head[pr], &mut tail[0], s, t, u, v, n);
                if let Some(tm) = tr.as_mut() {
                    let (th, tt) = tm.split_at_mut(i);
                    combine(&mut th[pr], &mut tt[0], s, t, u, v, n);
                }
            }
            if rows[pr][col] == 0 {
                continue;
            }
            let w = normalizing_unit(rows[pr][col], n);
            scale(&mut rows[pr], w, n);
            if let Some(t) = tr.as_mut() {
                scale(&mut t[pr], w, n);
            }
        }

        let g = rows[pr][col];
        let (head, tail) = rows.split_at_mut(pr);
        let pivot_row = &tail[0];
        for (r, above) in head.iter_mut().enumerate() {
            let q = above[col] / g;
            if q != 0 {
                sub_multiple(above, pivot_row, q, n);
                if let Some(t) = tr.as_mut() {
                    let (th, tt) = t.split_at_mut(pr);
                    sub_multiple(&mut th[r], &tt[0], q, n);
                }
            }
        }
        if g != 1 {
            let mut sat = rows[pr].clone();
            scale(&mut sat, n / g, n);
            if sat.iter().any(|&x| x != 0) {
                rows.push(sat);
                if let Some(t) = tr.as_mut() {
                    let mut ts = t[pr].clone();
                    scale(&mut ts, n / g, n);
                    t.push(ts);
                }
            }
        }
        pivots.push(col);
        pr += 1;
    }
    rows.truncate(pr);
    if let Some(t) = tr.as_mut() {
        t.truncate(pr);
    }
    Howell {
        rows,
        pivots,
        transform: tr,
    }
}

/// Greedy reduction of `v` by a Howell basis, only through pivots in columns
/// `< limit`. Returns the residue and the coefficients used.
pub(crate) fn reduce(n: u64, h: &Howell, v: &mut [u64], limit: usize) -> Vec<u64> {
    let mut coeffs = vec![0; h.rows.len()];
    for (k, (row, &c)) in h.rows.iter().zip(&h.pivots).enumerate() {
        if c >= limit {
            break;
        }
        let g = row[c];
        if v[c] % g != 0 {
            continue;
        }
        let q = v[c] / g;
        if q != 0 {
            sub_multiple(v, row, q, n);
            coeffs[k] = q;
        }
    }
    coeffs
}
