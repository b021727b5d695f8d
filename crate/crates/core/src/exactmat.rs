//! Dense exact matrices over a catalog ring, and invertible matrices that
//! carry their inverse with them.
//!
//! Nothing here inverts a matrix by elimination. Every [`GroupElement`] is
//! born from a formula (an elementary generator, the unitary block formula, a
//! product) and its inverse travels alongside it.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};

use crate::error::{Error, Result};
use crate::rings::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Self {
        Self {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    /// `E_ij`: a single one at zero-based position `(i, j)`.
    pub fn unit(ring: &Ring, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        m.entries[i * n + j] = ring.one();
        m
    }

    pub fn diagonal(ring: &Ring, diag: &[Elem]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(ring, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("matrix must have positive size".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for e in row {
                ring.check(&e)?;
                entries.push(e);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Integer matrix literal, reduced into `ring`.
    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&v| ring.from_int(v)).collect())
                .collect(),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.ring, self.rows)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DistinctRings)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = &self.ring;
        let mut out = Self::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = ring.add(&out.entries[idx], &ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Elem, &Elem) -> Elem) -> Result<Self> {
        self.same_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("entrywise operation on different shapes".into()));
        }
        Ok(Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| self.ring.sub(a, b))
    }

    /// Left scalar multiple `s·M`.
    pub fn scale(&self, s: &Elem) -> Self {
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| self.ring.mul(s, e)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Conjugate transpose `(x_ij)* = (x_ji*)`.
    pub fn star(&self) -> Result<Self> {
        let mut out = Self::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.ring.star(self.get(i, j))?);
            }
        }
        Ok(out)
    }

    /// Zero-based `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zero(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        Ok(out)
    }

    /// Overwrites the block at `(r0, c0)` with `src`.
    pub fn paste(&mut self, r0: usize, c0: usize, src: &Self) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j).clone());
            }
        }
    }

    /// Byte serialization of the normal form; equal matrices serialize equally.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.cols as u64).to_le_bytes());
        for e in &self.entries {
            match e {
                Elem::Int(v) => {
                    out.push(0);
                    push_bytes(&mut out, &v.to_signed_bytes_le());
                }
                Elem::Residue(r) => {
                    out.push(1);
                    out.extend_from_slice(&r.to_le_bytes());
                }
                Elem::Lin(map) => {
                    out.push(2);
                    out.extend_from_slice(&(map.len() as u64).to_le_bytes());
                    for (w, c) in map {
                        out.extend_from_slice(&(w.len() as u64).to_le_bytes());
                        for l in w {
                            out.extend_from_slice(&l.to_le_bytes());
                        }
                        push_bytes(&mut out, &c.to_signed_bytes_le());
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.ring.format(self.get(i, j))).collect())
                .collect(),
        }
    }

    pub fn from_json(ring: &Ring, json: &MatrixJson) -> Result<Self> {
        if json.entries.len() != json.rows || json.entries.iter().any(|r| r.len() != json.cols) {
            return Err(Error::Dimension("entries do not match rows/cols".into()));
        }
        let rows = json
            .entries
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ring, rows)
    }
}

fn push_bytes(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u64).to_le_bytes());
    out.extend_from_slice(bytes);
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.format(self.get(i, j))).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// JSON form `{"rows":n,"cols":n,"entries":[[...]]}` with element literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

/// SHA-256 of the canonical serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

pub fn canonical_hash(m: &Matrix) -> Digest {
    Digest(Sha256::digest(m.canonical_bytes()).into())
}

/// An invertible matrix paired with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    value: Matrix,
    inverse: Matrix,
}

impl GroupElement {
    /// Checked constructor: `value · inverse = inverse · value = I`.
    pub fn new(value: Matrix, inverse: Matrix) -> Result<Self> {
        if !value.is_square() || value.rows() != inverse.rows() || !inverse.is_square() {
            return Err(Error::Dimension("group elements are square".into()));
        }
        if !value.mul(&inverse)?.is_identity() || !inverse.mul(&value)?.is_identity() {
            return Err(Error::NotInverse);
        }
        Ok(Self { value, inverse })
    }

    /// For pairs that are mutually inverse by an algebraic identity.
    pub(crate) fn from_formula(value: Matrix, inverse: Matrix) -> Self {
        debug_assert!(value.mul(&inverse).map(|p| p.is_identity()).unwrap_or(false));
        Self { value, inverse }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let i = Matrix::identity(ring, n);
        Self {
            value: i.clone(),
            inverse: i,
        }
    }

    /// A self-inverse matrix, checked.
    pub fn involutory(value: Matrix) -> Result<Self> {
        Self::new(value.clone(), value)
    }

    pub fn value(&self) -> &Matrix {
        &self.value
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.value.rows()
    }

    pub fn ring(&self) -> &Ring {
        self.value.ring()
    }

    pub fn is_identity(&self) -> bool {
        self.value.is_identity()
    }

    pub fn inv(&self) -> Self {
        Self {
            value: self.inverse.clone(),
            inverse: self.value.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.mul(&other.value)?,
            inverse: other.inverse.mul(&self.inverse)?,
        })
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::identity(self.ring(), self.dim());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Product of a sequence; the identity of size `n` when empty.
    pub fn product<'a>(ring: &Ring, n: usize, items: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        items
            .into_iter()
            .try_fold(Self::identity(ring, n), |acc, g| acc.mul(g))
    }

    /// Order up to `limit`, or `None` if no power up to `limit` is the identity.
    pub fn order(&self, limit: usize) -> Result<Option<usize>> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = acc.mul(self)?;
        }
        Ok(None)
    }
}

/// `[g, h] = g h g^-1 h^-1`.
pub fn commutator(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    if g.dim() != h.dim() {
        return Err(Error::Dimension("commutator of different sizes".into()));
    }
    let value = g
        .value
        .mul(&h.value)?
        .mul(&g.inverse)?
        .mul(&h.inverse)?;
    let inverse = h
        .value
        .mul(&g.value)?
        .mul(&h.inverse)?
        .mul(&g.inverse)?;
    Ok(GroupElement { value, inverse })
}

pub fn block_diag(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    Ok(GroupElement {
        value: a.value.block_diag(&b.value)?,
        inverse: a.inverse.block_diag(&b.inverse)?,
    })
}
