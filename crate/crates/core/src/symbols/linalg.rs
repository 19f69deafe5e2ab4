use crate::arith::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn cols(m: &Matrix) -> usize {
    m.first().map_or(0, Vec::len)
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (r, c, inner) = (a.len(), cols(b), b.len());
    let mut out = zeros(r, c);
    for i in 0..r {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect()
}

pub fn scale(a: &Matrix, c: &Rational) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn is_zero(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(Rational::is_zero))
}

pub fn trace(a: &Matrix) -> Rational {
    let mut t = Rational::zero();
    for (i, r) in a.iter().enumerate() {
        t += &r[i];
    }
    t
}

/// Exact rank by fraction-free elimination over ℚ.
pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    let (rows, cs) = (m.len(), cols(&m));
    let mut r = 0;
    for c in 0..cs {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..cs {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
