//! Small-prime field arithmetic and dense linear algebra over `F_p`.
//!
//! Primes here stay below 2^32 so products fit in `u64`.

pub(crate) fn add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub(crate) fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

pub(crate) fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least prime `p ≡ 1 (mod m)` with `p > bound`.
pub(crate) fn dixon_prime(m: u64, bound: u64) -> u64 {
    let mut p = bound + 1;
    p += (m + 1 - p % m) % m;
    while !is_prime(p) || p % m != 1 % m {
        p += m;
    }
    p
}

/// An element of exact order `m` in `F_p^*`; requires `m | p - 1`.
pub(crate) fn element_of_order(m: u64, p: u64) -> u64 {
    let primes = prime_factors(m);
    (2..p)
        .map(|a| pow(a, (p - 1) / m, p))
        .find(|&z| primes.iter().all(|&q| pow(z, m / q, p) != 1))
        .unwrap_or(1)
}

/// Square matrix or list of row vectors over `F_p`.
pub(crate) type Rows = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns pivot columns.
pub(crate) fn rref(rows: &mut Rows, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let scale = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul(*x, scale, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let v = mul(f, rows[r][j], p);
                    rows[i][j] = sub(rows[i][j], v, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for an `r × c` matrix.
pub(crate) fn nullspace(a: &Rows, ncols: usize, p: u64) -> Rows {
    let mut m = a.clone();
    let pivots = rref(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = sub(0, row[f], p);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI - A)`, lowest degree first, via
/// reduction to upper Hessenberg form.
pub(crate) fn charpoly(a: &Rows, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.clone();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| h[i][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let pinv = inv(h[col + 1][col], p);
        for i in col + 2..n {
            let f = mul(h[i][col], pinv, p);
            if f == 0 {
                continue;
            }
            for j in 0..n {
                let v = mul(f, h[col + 1][j], p);
                h[i][j] = sub(h[i][j], v, p);
            }
            for row in h.iter_mut() {
                let v = mul(f, row[i], p);
                row[col + 1] = add(row[col + 1], v, p);
            }
        }
    }
    // polys[k] = charpoly of the leading k×k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        // x * polys[k-1] - h[k-1][k-1] * polys[k-1]
        let prev = &polys[k - 1];
        let mut next = vec![0; k + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = add(next[i + 1], c, p);
            next[i] = sub(next[i], mul(h[k - 1][k - 1], c, p), p);
        }
        let mut t = 1;
        for i in (0..k - 1).rev() {
            t = mul(t, h[i + 1][i], p);
            let coef = mul(t, h[i][k - 1], p);
            for (j, &c) in polys[i].iter().enumerate() {
                next[j] = sub(next[j], mul(coef, c, p), p);
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n+1 entries")
}

pub(crate) fn eval(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| add(mul(acc, x, p), c, p))
}

/// All roots in `F_p` by exhaustive scan, ascending.
pub(crate) fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| eval(poly, x, p) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(dixon_prime(6, 6), 7);
        assert_eq!(dixon_prime(4, 10), 13);
        assert_eq!(dixon_prime(1, 4), 5);
        let z = element_of_order(6, 7);
        assert_eq!(pow(z, 6, 7), 1);
        assert!((1..6).all(|k| pow(z, k, 7) != 1));
    }

    fn det(a: &Rows, p: u64) -> u64 {
        let n = a.len();
        let mut m = a.clone();
        let mut d = 1;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| m[r][c] != 0) else {
                return 0;
            };
            if r != c {
                m.swap(r, c);
                d = sub(0, d, p);
            }
            d = mul(d, m[c][c], p);
            let ic = inv(m[c][c], p);
            for r in c + 1..n {
                let f = mul(m[r][c], ic, p);
                for j in 0..n {
                    let v = mul(f, m[c][j], p);
                    m[r][j] = sub(m[r][j], v, p);
                }
            }
        }
        d
    }

    #[test]
    fn charpoly_matches_determinants() {
        let p = 101;
        let a: Rows = vec![vec![3, 1, 4, 1], vec![5, 9, 2, 6], vec![5, 3, 5, 8], vec![9, 7, 9, 3]];
        let cp = charpoly(&a, p);
        assert_eq!(cp.len(), 5);
        assert_eq!(cp[4], 1);
        for x in 0..p {
            let shifted: Rows = (0..4)
                .map(|i| (0..4).map(|j| sub(if i == j { x } else { 0 }, a[i][j], p)).collect())
                .collect();
            assert_eq!(eval(&cp, x, p), det(&shifted, p));
        }
    }

    #[test]
    fn nullspace_of_rank_one() {
        let p = 13;
        let a: Rows = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ns = nullspace(&a, 3, p);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % p, 0);
        }
    }
}
