//! Structured Jacobian matrices of a difference system, and the generic
//! twisted block families they specialize.
//!
//! Only the e+1 base blocks dF/dY^(q) are ever differentiated; every other
//! block is a transform of one of those, so commutation of the transform
//! with the partial derivative holds by construction.

use crate::dfield::{DifferenceField, FieldElement};
use crate::error::{Error, Result};
use crate::sigma::{SigmaPolynomial, SystemSpec, VarRef};

/// Dense matrix of difference polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<SigmaPolynomial>,
}

impl SymbolicMatrix {
    pub fn zero(rows: usize, cols: usize, coeff_nvars: usize) -> Self {
        SymbolicMatrix {
            rows,
            cols,
            entries: vec![SigmaPolynomial::zero(coeff_nvars); rows * cols],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &SigmaPolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: SigmaPolynomial) {
        self.entries[i * self.cols + j] = p;
    }

    /// Entrywise transform by sigma^m.
    pub fn transform(&self, m: usize, field: &DifferenceField) -> SymbolicMatrix {
        SymbolicMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.transform(m, field)).collect(),
        }
    }

    pub fn display_grid(&self, var_names: &[String], gen_names: &[String]) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).display(var_names, gen_names))
                    .collect()
            })
            .collect();
        align_grid(&cells)
    }
}

/// Dense matrix over a difference field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            entries: vec![FieldElement::zero(nvars); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        FieldMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transform(&self, m: usize, field: &DifferenceField) -> FieldMatrix {
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|x| field.sigma_apply(x, m))
                .collect(),
        }
    }

    pub fn display_grid(&self, gen_names: &[String]) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).display(gen_names))
                    .collect()
            })
            .collect();
        align_grid(&cells)
    }
}

fn align_grid(cells: &[Vec<String>]) -> String {
    if cells.is_empty() {
        return String::from("(empty)");
    }
    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    cells
        .iter()
        .map(|row| {
            let line = row
                .iter()
                .enumerate()
                .map(|(j, s)| format!("{:>w$}", s, w = widths[j]))
                .collect::<Vec<_>>()
                .join("  ");
            format!("[ {line} ]")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// The e+1 base Jacobian blocks: block q holds d f_i / d y_j@q at (i, j).
pub fn jacobian_blocks(sys: &SystemSpec) -> Vec<SymbolicMatrix> {
    let (r, n, g) = (sys.r(), sys.n(), sys.field.nvars());
    (0..=sys.e)
        .map(|q| {
            let mut block = SymbolicMatrix::zero(r, n, g);
            for (i, f) in sys.equations.iter().enumerate() {
                for j in 0..n {
                    block.set(i, j, f.partial_derivative(VarRef::new(j, q)));
                }
            }
            block
        })
        .collect()
}

/// J_k: the kr x (k+e)n Jacobian of (F, F^(1), .., F^(k-1)) with respect to
/// the variables of order 0 .. k-1+e. Block row b carries the base blocks
/// transformed by b, starting at column block b.
pub fn build_jk(sys: &SystemSpec, k: usize) -> SymbolicMatrix {
    assert!(k >= 1, "J_k requires k >= 1");
    let (r, n, e, g) = (sys.r(), sys.n(), sys.e, sys.field.nvars());
    let base = jacobian_blocks(sys);
    let mut m = SymbolicMatrix::zero(k * r, (k + e) * n, g);
    for b in 0..k {
        for (q, block) in base.iter().enumerate() {
            let shifted = block.transform(b, &sys.field);
            for i in 0..r {
                for j in 0..n {
                    m.set(b * r + i, (b + q) * n + j, shifted.at(i, j).clone());
                }
            }
        }
    }
    m
}

/// J_{k,i}: the kr x kn lower block-triangular pseudo-Jacobian. Block
/// (b, c) with b >= c holds the base block of derivative order e-b+c,
/// transformed by i-e+1+b; blocks with e-b+c < 0 are zero. k = 0 yields
/// the empty matrix.
pub fn build_jki(sys: &SystemSpec, k: usize, i: usize) -> Result<SymbolicMatrix> {
    let e = sys.e;
    if i + 1 < e {
        return Err(Error::IndexTooSmall { i, min: e - 1 });
    }
    let (r, n, g) = (sys.r(), sys.n(), sys.field.nvars());
    let base = jacobian_blocks(sys);
    let mut m = SymbolicMatrix::zero(k * r, k * n, g);
    for b in 0..k {
        let shift = i + 1 - e + b;
        for c in 0..=b {
            let q = e as i64 - b as i64 + c as i64;
            if q < 0 {
                continue;
            }
            let block = base[q as usize].transform(shift, &sys.field);
            for ii in 0..r {
                for jj in 0..n {
                    m.set(b * r + ii, c * n + jj, block.at(ii, jj).clone());
                }
            }
        }
    }
    Ok(m)
}

/// A family E_1 .. E_t of p x q blocks over a difference field, the seed of
/// the generic twisted families below.
#[derive(Clone, Debug)]
pub struct BlockFamily {
    pub field: DifferenceField,
    pub p: usize,
    pub q: usize,
    pub blocks: Vec<FieldMatrix>,
}

impl BlockFamily {
    pub fn new(field: DifferenceField, blocks: Vec<FieldMatrix>) -> Self {
        assert!(!blocks.is_empty());
        let p = blocks[0].rows;
        let q = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.rows == p && b.cols == q));
        BlockFamily {
            field,
            p,
            q,
            blocks,
        }
    }

    pub fn t(&self) -> usize {
        self.blocks.len()
    }
}

/// M_k: kp x (k+t-1)q; row block b holds E_1^(b) .. E_t^(b) starting at
/// column block b.
pub fn build_mk(fam: &BlockFamily, k: usize) -> FieldMatrix {
    let (p, q, t) = (fam.p, fam.q, fam.t());
    let g = fam.field.nvars();
    let mut m = FieldMatrix::zero(k * p, (k + t - 1) * q, g);
    for b in 0..k {
        for (s, block) in fam.blocks.iter().enumerate() {
            let shifted = block.transform(b, &fam.field);
            for i in 0..p {
                for j in 0..q {
                    m.set(b * p + i, (b + s) * q + j, shifted.at(i, j).clone());
                }
            }
        }
    }
    m
}

/// N_k: kp x kq lower block-triangular; row block b holds E_{b-c+1}^(b) at
/// column block c (zero outside the family range).
pub fn build_nk(fam: &BlockFamily, k: usize) -> FieldMatrix {
    let (p, q, t) = (fam.p, fam.q, fam.t());
    let g = fam.field.nvars();
    let mut m = FieldMatrix::zero(k * p, k * q, g);
    for b in 0..k {
        for c in b.saturating_sub(t - 1)..=b {
            let block = fam.blocks[b - c].transform(b, &fam.field);
            for i in 0..p {
                for j in 0..q {
                    m.set(b * p + i, c * q + j, block.at(i, j).clone());
                }
            }
        }
    }
    m
}
