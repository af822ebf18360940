//! Linear systems over `Z/M` by Smith-style diagonalization with unimodular
//! row and column operations.

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solves `A x ≡ b (mod m)` for a dense `rows x cols` matrix. Returns one
/// solution with free variables set to zero, or `None` when inconsistent.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], cols: usize, m: u64) -> Option<Vec<u64>> {
    let rows = a.len();
    let mm = m as i128;
    let md = |x: i128| x.rem_euclid(mm);
    let mut a: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| md(v as i128)).collect())
        .collect();
    let mut b: Vec<i128> = b.iter().map(|&v| md(v as i128)).collect();
    // Column transform, stored by columns.
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|j| (0..cols).map(|i| (i == j) as i128).collect())
        .collect();

    let mut rank = 0;
    for t in 0..rows.min(cols) {
        // Pivot with the smallest gcd against m (units first).
        let mut best: Option<(u64, usize, usize)> = None;
        'search: for i in t..rows {
            for j in t..cols {
                let e = a[i][j];
                if e != 0 {
                    let g = gcd(e as u64, m);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                        if g == 1 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        if pj != t {
            for r in a.iter_mut() {
                r.swap(t, pj);
            }
            v.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let (p, q) = (a[t][t], a[i][t]);
                if q == 0 {
                    continue;
                }
                if q % p == 0 {
                    let f = q / p;
                    for j in t..cols {
                        a[i][j] = md(a[i][j] - f * a[t][j]);
                    }
                    b[i] = md(b[i] - f * b[t]);
                } else {
                    let (g, s, u) = ext_gcd(p, q);
                    let (pg, qg) = (p / g, q / g);
                    for j in t..cols {
                        let (x, y) = (a[t][j], a[i][j]);
                        a[t][j] = md(s * x + u * y);
                        a[i][j] = md(qg * x - pg * y);
                    }
                    let (x, y) = (b[t], b[i]);
                    b[t] = md(s * x + u * y);
                    b[i] = md(qg * x - pg * y);
                }
            }
            for j in t + 1..cols {
                let (p, q) = (a[t][t], a[t][j]);
                if q == 0 {
                    continue;
                }
                if q % p == 0 {
                    let f = q / p;
                    for r in a.iter_mut().skip(t) {
                        r[j] = md(r[j] - f * r[t]);
                    }
                    for k in 0..cols {
                        v[j][k] = md(v[j][k] - f * v[t][k]);
                    }
                } else {
                    dirty = true;
                    let (g, s, u) = ext_gcd(p, q);
                    let (pg, qg) = (p / g, q / g);
                    for r in a.iter_mut().skip(t) {
                        let (x, y) = (r[t], r[j]);
                        r[t] = md(s * x + u * y);
                        r[j] = md(qg * x - pg * y);
                    }
                    let (vt, vj) = (v[t].clone(), v[j].clone());
                    for k in 0..cols {
                        v[t][k] = md(s * vt[k] + u * vj[k]);
                        v[j][k] = md(qg * vt[k] - pg * vj[k]);
                    }
                }
            }
            if !dirty && (t + 1..rows).all(|i| a[i][t] == 0) {
                break;
            }
        }
        rank = t + 1;
    }
    if b.iter().skip(rank).any(|&c| c != 0) {
        return None;
    }
    let mut y = vec![0i128; cols];
    for t in 0..rank {
        let d = a[t][t] as u64;
        let c = b[t] as u64;
        let g = gcd(d, m);
        if !c.is_multiple_of(g) {
            return None;
        }
        let mg = (m / g) as i128;
        let (_, inv, _) = ext_gcd(((d / g) as i128).rem_euclid(mg), mg);
        y[t] = ((c / g) as i128 * inv).rem_euclid(mg);
    }
    let mut x = vec![0u64; cols];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut s = 0i128;
        for j in 0..cols {
            s = md(s + v[j][k] * y[j]);
        }
        *xk = s as u64;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &[Vec<u64>], b: &[u64], x: &[u64], m: u64) {
        for (row, &bi) in a.iter().zip(b) {
            let s: u64 = row.iter().zip(x).map(|(&p, &q)| p * q % m).sum::<u64>() % m;
            assert_eq!(s, bi % m);
        }
    }

    #[test]
    fn solves_non_unit_pivots() {
        let a = vec![vec![2, 4], vec![6, 3]];
        let b = vec![2, 3];
        let x = solve_mod(&a, &b, 2, 12).unwrap();
        check(&a, &b, &x, 12);
    }

    #[test]
    fn detects_inconsistency() {
        // 2x ≡ 1 (mod 4) has no solution.
        assert!(solve_mod(&[vec![2]], &[1], 1, 4).is_none());
        // x + y ≡ 0, x + y ≡ 1.
        assert!(solve_mod(&[vec![1, 1], vec![1, 1]], &[0, 1], 2, 5).is_none());
    }

    #[test]
    fn random_consistent_systems() {
        let mut s = 12345u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        for m in [2u64, 6, 8, 9, 12] {
            for _ in 0..30 {
                let rows = 1 + (next() % 7) as usize;
                let cols = 1 + (next() % 6) as usize;
                let a: Vec<Vec<u64>> = (0..rows)
                    .map(|_| (0..cols).map(|_| next() % m).collect())
                    .collect();
                let x0: Vec<u64> = (0..cols).map(|_| next() % m).collect();
                let b: Vec<u64> = a
                    .iter()
                    .map(|r| r.iter().zip(&x0).map(|(p, q)| p * q % m).sum::<u64>() % m)
                    .collect();
                let x = solve_mod(&a, &b, cols, m).expect("consistent by construction");
                check(&a, &b, &x, m);
            }
        }
    }
}
