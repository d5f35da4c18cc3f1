//! Orthogonal Latin squares and the `t`-coordinate encoding of `3K_t`
//! (three disjoint copies of `K_t`) built from them.
//!
//! Orders congruent to 2 mod 4 are never built. [`choose_ols_order`] bumps
//! them to the next odd order instead.

use alloc::vec;
use alloc::vec::Vec;

use crate::encoding::{Encoding, Symbol};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatinError {
    #[error("no construction for order {0}")]
    BadOrder(usize),
    #[error("square is not Latin")]
    NotLatin,
    #[error("squares have different orders")]
    OrderMismatch,
    #[error("squares are not orthogonal")]
    NotOrthogonal,
    #[error("row {0} of the first square meets row {1} of the second nowhere")]
    NoRowMeeting(usize, usize),
    #[error("triple clique code property violated")]
    PropertyViolation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<usize>,
}

impl LatinSquare {
    /// Builds a square from rows, checking that every row and column is a
    /// permutation of `0..m`.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, LatinError> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(LatinError::NotLatin);
        }
        let sq = LatinSquare {
            order: m,
            cells: rows.into_iter().flatten().collect(),
        };
        sq.verify()?;
        Ok(sq)
    }

    fn from_fn(m: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let cells = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        LatinSquare { order: m, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.cells[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.cells.chunks(self.order.max(1)).take(self.order)
    }

    pub fn verify(&self) -> Result<(), LatinError> {
        let m = self.order;
        let mut seen = vec![usize::MAX; m];
        for line in 0..2 * m {
            for k in 0..m {
                let s = if line < m {
                    self.get(line, k)
                } else {
                    self.get(k, line - m)
                };
                if s >= m || seen[s] == line {
                    return Err(LatinError::NotLatin);
                }
                seen[s] = line;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsPair {
    pub a: LatinSquare,
    pub b: LatinSquare,
}

impl MolsPair {
    /// Pairs two squares after checking Latin-ness, orthogonality and
    /// row-meeting.
    pub fn new(a: LatinSquare, b: LatinSquare) -> Result<Self, LatinError> {
        let p = MolsPair { a, b };
        p.verify()?;
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.a.order
    }

    pub fn verify(&self) -> Result<(), LatinError> {
        let m = self.a.order;
        if self.b.order != m {
            return Err(LatinError::OrderMismatch);
        }
        self.a.verify()?;
        self.b.verify()?;
        let mut pairs = vec![false; m * m];
        for (x, y) in self.a.cells.iter().zip(&self.b.cells) {
            let slot = &mut pairs[x * m + y];
            if *slot {
                return Err(LatinError::NotOrthogonal);
            }
            *slot = true;
        }
        for i in 0..m {
            for k in 0..m {
                let meets = self.a.row(i).iter().zip(self.b.row(k)).any(|(x, y)| x == y);
                if !meets {
                    return Err(LatinError::NoRowMeeting(i, k));
                }
            }
        }
        Ok(())
    }
}

/// `a[i][j] = i + j`, `b[i][j] = i + 2j` modulo an odd `m >= 3`.
pub fn mols_odd(m: usize) -> Result<MolsPair, LatinError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(LatinError::BadOrder(m));
    }
    MolsPair::new(
        LatinSquare::from_fn(m, |i, j| (i + j) % m),
        LatinSquare::from_fn(m, |i, j| (i + 2 * j) % m),
    )
}

/// Smallest irreducible polynomial of degree `deg` over GF(2), as a bit mask
/// including the leading term.
fn irreducible(deg: u32) -> u64 {
    let lo = 1u64 << deg;
    (lo..lo << 1)
        .find(|&p| {
            // no factor of degree 1..=deg/2
            (2u64..1 << (deg / 2 + 1)).all(|q| poly_mod(p, q) != 0)
        })
        .expect("irreducible polynomials exist in every degree")
}

fn poly_mod(mut p: u64, q: u64) -> u64 {
    let dq = 63 - q.leading_zeros();
    while p != 0 && 63 - p.leading_zeros() >= dq {
        p ^= q << (63 - p.leading_zeros() - dq);
    }
    p
}

fn gf_mul(mut x: u64, mut y: u64, modulus: u64, deg: u32) -> u64 {
    let mut acc = 0;
    while y != 0 {
        if y & 1 == 1 {
            acc ^= x;
        }
        y >>= 1;
        x <<= 1;
        if x >> deg & 1 == 1 {
            x ^= modulus;
        }
    }
    acc
}

/// Squares over GF(2^a) for `m = 2^a >= 4`: `a[i][j] = i + j` and
/// `b[i][j] = i + x·j`, where `x` is the field element with bits `10`.
pub fn mols_power_of_two(m: usize) -> Result<MolsPair, LatinError> {
    if m < 4 || !m.is_power_of_two() {
        return Err(LatinError::BadOrder(m));
    }
    let deg = m.trailing_zeros();
    let modulus = irreducible(deg);
    MolsPair::new(
        LatinSquare::from_fn(m, |i, j| i ^ j),
        LatinSquare::from_fn(m, |i, j| i ^ gf_mul(2, j as u64, modulus, deg) as usize),
    )
}

/// Kronecker product: cell `((i1,i2),(j1,j2))` holds `m2·p[i1][j1] + q[i2][j2]`.
pub fn mols_product(p: &MolsPair, q: &MolsPair) -> Result<MolsPair, LatinError> {
    let (m1, m2) = (p.order(), q.order());
    let combine = |x: &LatinSquare, y: &LatinSquare| {
        LatinSquare::from_fn(m1 * m2, |i, j| {
            m2 * x.get(i / m2, j / m2) + y.get(i % m2, j % m2)
        })
    };
    MolsPair::new(combine(&p.a, &q.a), combine(&p.b, &q.b))
}

/// Pair of order `m` for any odd `m >= 3` or `m ≡ 0 (mod 4)`.
pub fn mols(m: usize) -> Result<MolsPair, LatinError> {
    if m % 2 == 1 {
        return mols_odd(m);
    }
    if m < 4 || !m.is_multiple_of(4) {
        return Err(LatinError::BadOrder(m));
    }
    let two = 1usize << m.trailing_zeros();
    let odd = m / two;
    let p = mols_power_of_two(two)?;
    if odd == 1 {
        Ok(p)
    } else {
        mols_product(&p, &mols_odd(odd)?)
    }
}

/// Smallest constructible order at least `max(c, 3)`: that value itself when
/// it is odd or divisible by 4, otherwise one more.
pub fn choose_ols_order(c: usize) -> usize {
    let m = c.max(3);
    if m % 4 == 2 {
        m + 1
    } else {
        m
    }
}

/// Codewords for `3K_t`: copy 0 vertex `j` is the constant word `j`, copies 1
/// and 2 take row `j` of the two squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCliqueCode {
    t: usize,
    codes: Vec<Vec<Symbol>>,
}

impl TripleCliqueCode {
    pub fn order(&self) -> usize {
        self.t
    }

    /// Codeword of vertex `j` in copy `copy`.
    pub fn code(&self, copy: usize, j: usize) -> &[Symbol] {
        &self.codes[copy * self.t + j]
    }

    /// The code as an encoding of [`triple_clique`]`(t)`.
    pub fn to_encoding(&self) -> Encoding {
        Encoding::from_codes(self.t, self.codes.clone()).expect("codes have length t")
    }

    fn verify(&self) -> Result<(), LatinError> {
        let t = self.t;
        for x in 0..3 * t {
            for y in x + 1..3 * t {
                let (cx, cy) = (self.codes[x].as_slice(), self.codes[y].as_slice());
                let agree = cx.iter().zip(cy).filter(|(a, b)| a == b).count();
                let ok = if x / t == y / t {
                    agree == 0
                } else {
                    agree >= 1 && agree < t
                };
                if !ok {
                    return Err(LatinError::PropertyViolation);
                }
            }
        }
        Ok(())
    }
}

pub fn encode_triple_clique(t: usize, via: &MolsPair) -> Result<TripleCliqueCode, LatinError> {
    if t < 3 || via.order() != t {
        return Err(LatinError::BadOrder(t));
    }
    via.verify().map_err(|_| LatinError::PropertyViolation)?;
    let mut codes = Vec::with_capacity(3 * t);
    codes.extend((0..t).map(|j| vec![j as Symbol; t]));
    for sq in [&via.a, &via.b] {
        codes.extend(
            sq.rows()
                .map(|r| r.iter().map(|&s| s as Symbol).collect::<Vec<_>>()),
        );
    }
    let code = TripleCliqueCode { t, codes };
    code.verify()?;
    Ok(code)
}

/// `3K_t` with copy `i` on vertices `i·t .. (i+1)·t`.
pub fn triple_clique(t: usize) -> Graph {
    let edges = (0..3).flat_map(|c| {
        (0..t).flat_map(move |x| {
            (x + 1..t).map(move |y| ((c * t + x) as Vertex, (c * t + y) as Vertex))
        })
    });
    Graph::new(3 * t, edges).expect("valid clique edges")
}
