//! Exponent lattices and the Laurent encoding of a finite stage.
//!
//! The exponential arguments occurring in finitely many elements generate a
//! finitely generated torsion-free (hence free) subgroup of the additive
//! group. Clearing a common denominator and taking a Hermite normal form
//! yields a basis; writing every argument in that basis turns each `t^a`
//! into a Laurent monomial `u^k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{LMono, LaurentPoly};
use crate::base::{BExp, BaseCoeff, Rational};
use crate::epoly::{EPoly, GMonomial};
use crate::error::{Error, Result};

type Coord = (GMonomial, BExp);

/// View an exponential argument as a rational vector indexed by
/// (generalized monomial, base monomial) pairs.
fn flatten(e: &EPoly) -> BTreeMap<Coord, Rational> {
    let mut out = BTreeMap::new();
    for (m, c) in e.terms() {
        for (b, r) in c.terms() {
            out.insert((m.clone(), b.clone()), r.clone());
        }
    }
    out
}

/// Row-style Hermite normal form over the integers. Returns the nonzero
/// rows (a basis of the row lattice) and their pivot columns; pivots are
/// positive and entries above each pivot are reduced into `[0, pivot)`.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            // Bring the smallest nonzero entry of this column to row r.
            let best = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[r][col];
                if !q.is_zero() {
                    let pivot_row = rows[r].clone();
                    for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                        *a -= &q * b;
                    }
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for a in rows[r].iter_mut() {
                *a = -&*a;
            }
        }
        let pivot_row = rows[r].clone();
        for i in 0..r {
            let q = rows[i][col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                    *a -= &q * b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A free abelian group of exponential arguments with an explicit basis.
#[derive(Clone, Debug)]
pub struct ExponentLattice {
    nvars: usize,
    atoms: Vec<EPoly>,
    coords: Vec<Coord>,
    coord_index: BTreeMap<Coord, usize>,
    /// Integer rows spanning `denominator * L`, in Hermite normal form.
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    denominator: BigInt,
}

/// The lattice generated by the top-level exponential arguments of `ps`.
pub fn extract_lattice(nvars: usize, ps: &[EPoly]) -> ExponentLattice {
    let mut atoms: Vec<EPoly> = Vec::new();
    for p in ps {
        for a in p.top_level_expargs() {
            if !atoms.contains(&a) {
                atoms.push(a);
            }
        }
    }
    ExponentLattice::from_atoms(nvars, atoms)
}

impl ExponentLattice {
    pub fn from_atoms(nvars: usize, atoms: Vec<EPoly>) -> Self {
        let flats: Vec<_> = atoms.iter().map(flatten).collect();
        let mut all: Vec<Coord> = Vec::new();
        for f in &flats {
            for k in f.keys() {
                all.push(k.clone());
            }
        }
        all.sort();
        all.dedup();
        all.reverse();
        let coord_index: BTreeMap<Coord, usize> =
            all.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut denominator = BigInt::one();
        for f in &flats {
            for r in f.values() {
                denominator = denominator.lcm(r.denom());
            }
        }
        let rows: Vec<Vec<BigInt>> = flats
            .iter()
            .map(|f| {
                let mut row = vec![BigInt::zero(); all.len()];
                for (k, r) in f {
                    let scaled = r * Rational::from_integer(denominator.clone());
                    row[coord_index[k]] = scaled.to_integer();
                }
                row
            })
            .collect();
        let (basis, pivots) = hermite_normal_form(rows);
        ExponentLattice {
            nvars,
            atoms,
            coords: all,
            coord_index,
            basis,
            pivots,
            denominator,
        }
    }

    /// The same lattice enlarged by further atoms.
    pub fn enlarged(&self, extra: &[EPoly]) -> Self {
        let mut atoms = self.atoms.clone();
        for a in extra {
            let (_, a) = a.split_constant();
            if !a.is_zero() && !atoms.contains(&a) {
                atoms.push(a);
            }
        }
        Self::from_atoms(self.nvars, atoms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn atoms(&self) -> &[EPoly] {
        &self.atoms
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Basis vector `k` as an exponential argument.
    pub fn basis_vector(&self, k: usize) -> EPoly {
        let d = Rational::from_integer(self.denominator.clone());
        let terms = self.basis[k]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(col, v)| {
                let (m, b) = &self.coords[col];
                let r = Rational::from_integer(v.clone()) / &d;
                (m.clone(), BaseCoeff::monomial(b.clone(), r))
            });
        EPoly::from_terms(self.nvars, terms)
    }

    pub fn basis_vectors(&self) -> Vec<EPoly> {
        (0..self.rank()).map(|k| self.basis_vector(k)).collect()
    }

    /// Integer coordinates of `e` in the basis.
    pub fn coordinates(&self, e: &EPoly) -> Result<Vec<i64>> {
        let outside = || Error::ExponentOutsideLattice(e.to_string());
        let d = Rational::from_integer(self.denominator.clone());
        let mut v = vec![BigInt::zero(); self.coords.len()];
        for (k, r) in flatten(e) {
            let col = *self.coord_index.get(&k).ok_or_else(outside)?;
            let s = r * &d;
            if !s.is_integer() {
                return Err(outside());
            }
            v[col] = s.to_integer();
        }
        let mut out = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, rem) = v[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return Err(outside());
            }
            if !q.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
            out.push(q.to_i64().ok_or_else(outside)?);
        }
        if v.iter().any(|a| !a.is_zero()) {
            return Err(outside());
        }
        Ok(out)
    }

    /// Laurent image of `p`; `x` exponents are kept, each `t^a` becomes
    /// `u^coordinates(a)`.
    pub fn encode(&self, p: &EPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(p.nvars(), self.rank());
        for (m, c) in p.terms() {
            let r = c
                .as_rational()
                .ok_or_else(|| Error::CoefficientNotRational(p.to_string()))?;
            let u = if m.exparg().is_zero() {
                vec![0; self.rank()]
            } else {
                self.coordinates(m.exparg())?
            };
            out.add_term(
                LMono {
                    x: m.xexp().to_vec(),
                    u,
                },
                r,
            );
        }
        Ok(out)
    }

    pub fn decode(&self, f: &LaurentPoly) -> EPoly {
        let basis = self.basis_vectors();
        let terms = f.terms().map(|(mono, r)| {
            let mut arg = EPoly::zero(self.nvars);
            for (k, &e) in mono.u.iter().enumerate() {
                if e != 0 {
                    arg = &arg + &basis[k].scale(&Rational::from_integer(BigInt::from(e)));
                }
            }
            (
                GMonomial::new(mono.x.clone(), arg),
                BaseCoeff::from_rational(r.clone()),
            )
        });
        EPoly::from_terms(self.nvars, terms)
    }
}
