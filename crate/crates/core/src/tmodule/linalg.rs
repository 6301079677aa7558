use crate::error::{Error, Result};
use crate::infinity::InfElem;

/// Square or rectangular matrix of InfElem entries (row major).
pub type Mat = Vec<Vec<InfElem>>;

pub fn mat_zero(like: &InfElem, rows: usize, cols: usize) -> Mat {
    let z = like.scale(crate::Fe::ZERO).with_prec_exact(crate::infinity::EXACT);
    vec![vec![z; cols]; rows]
}

pub fn mat_identity(like: &InfElem, d: usize) -> Mat {
    let mut m = mat_zero(like, d, d);
    let one = InfElem::one(like.field(), like.e(), crate::infinity::EXACT);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = one.clone();
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = a[i][0].mul(&b[0][j]);
                    for l in 1..k {
                        acc = acc.add(&a[i][l].mul(&b[l][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}

pub fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}

pub fn mat_frobenius(a: &Mat, n: i64) -> Result<Mat> {
    a.iter().map(|r| r.iter().map(|x| x.frobenius(n)).collect()).collect()
}

pub fn mat_vec(a: &Mat, v: &[InfElem]) -> Vec<InfElem> {
    a.iter()
        .map(|r| {
            let mut acc = r[0].mul(&v[0]);
            for (x, y) in r.iter().zip(v).skip(1) {
                acc = acc.add(&x.mul(y));
            }
            acc
        })
        .collect()
}

pub fn mat_is_zero(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Solves A x = b by elimination, pivoting on the entry of least valuation.
pub fn solve(a: &Mat, b: &[InfElem]) -> Result<Vec<InfElem>> {
    let n = a.len();
    let mut m: Vec<Vec<InfElem>> = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].val().unwrap())
            .ok_or(Error::DivisionByApparentZero)?;
        m.swap(col, piv);
        let inv = m[col][col].inv()?;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&inv);
            for c in col..=n {
                let d = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&d);
            }
        }
    }
    (0..n).map(|i| m[i][n].div(&m[i][i])).collect()
}

/// Determinant by elimination (pivoting on least valuation).
pub fn det(a: &Mat) -> Result<InfElem> {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = InfElem::one(a[0][0].field(), a[0][0].e(), crate::infinity::EXACT);
    for col in 0..n {
        let piv = match (col..n).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| m[r][col].val().unwrap()) {
            Some(p) => p,
            None => return Ok(acc.scale(crate::Fe::ZERO).truncate(m[col][col].prec())),
        };
        if piv != col {
            m.swap(col, piv);
            acc = acc.neg();
        }
        let inv = m[col][col].inv()?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&inv);
            for c in col..n {
                let d = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&d);
            }
        }
        acc = acc.mul(&m[col][col]);
    }
    Ok(acc)
}
