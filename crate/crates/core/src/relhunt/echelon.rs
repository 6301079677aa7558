use crate::arith::{Fe, FieldDesc};

/// Incrementally maintained reduced row echelon form.
pub(crate) struct Echelon {
    field: FieldDesc,
    ncols: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: FieldDesc, ncols: usize) -> Self {
        Echelon { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut row: Vec<Fe>) -> Vec<Fe> {
        let f = &self.field;
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = row[p];
            if c.is_zero() {
                continue;
            }
            for j in p..self.ncols {
                if !r[j].is_zero() {
                    row[j] = f.sub(row[j], f.mul(c, r[j]));
                }
            }
        }
        row
    }

    pub fn contains(&self, row: &[Fe]) -> bool {
        self.reduce(row.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: Vec<Fe>) -> bool {
        let f = self.field.clone();
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(row[p]);
        for x in row.iter_mut().skip(p) {
            *x = f.mul(*x, inv);
        }
        for r in self.rows.iter_mut() {
            let c = r[p];
            if c.is_zero() {
                continue;
            }
            for j in p..self.ncols {
                if !row[j].is_zero() {
                    r[j] = f.sub(r[j], f.mul(c, row[j]));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, row);
        true
    }

    /// Kernel basis: one vector per free column, with 1 there and support on earlier columns.
    pub fn kernel(&self) -> Vec<(usize, Vec<Fe>)> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut next = 0;
        for c in 0..self.ncols {
            if next < self.pivots.len() && self.pivots[next] == c {
                next += 1;
                continue;
            }
            let mut v = vec![Fe::ZERO; self.ncols];
            v[c] = f.one();
            for (r, &p) in self.rows.iter().zip(&self.pivots) {
                if p < c {
                    v[p] = f.neg(r[c]);
                }
            }
            out.push((c, v));
        }
        out
    }
}
