//! Mixed Moore bound and the closed-form feasibility filters.
//!
//! The level recurrence is the authoritative value. The closed form
//! `M = A (u₁^{k+1} - 1)/(u₁ - 1) + B (u₂^{k+1} - 1)/(u₂ - 1)` is evaluated
//! exactly in the quadratic field ℚ(√v) and used as a cross-check.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Level counts of the Moore tree: `a[i]` walks of length `i` whose final
/// step is an edge, `b[i]` those whose final step is an arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub edge_ended: Vec<BigUint>,
    pub arc_ended: Vec<BigUint>,
}

impl LevelCounts {
    pub fn level(&self, i: usize) -> BigUint {
        &self.edge_ended[i] + &self.arc_ended[i]
    }

    pub fn depth(&self) -> usize {
        self.edge_ended.len() - 1
    }

    pub fn total(&self) -> BigUint {
        (0..=self.depth()).map(|i| self.level(i)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreBound {
    pub r: u64,
    pub z: u64,
    pub k: u64,
    pub bound: BigUint,
    pub levels: LevelCounts,
    /// `r == 0 || z == 0`: not a proper mixed setting.
    pub degenerate_parameters: bool,
}

impl MooreBound {
    /// The bound as a machine integer, when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        self.bound.to_u64()
    }
}

/// M(r, z, k) by the level recurrence `a' = (r-1)a + r b`, `b' = z(a + b)`
/// starting from the root as `a₀ = 0, b₀ = 1`.
pub fn moore_bound(r: u64, z: u64, k: u64) -> MooreBound {
    let r_big = BigUint::from(r);
    let z_big = BigUint::from(z);
    // the root behaves like an arc-ended walk: every edge may follow it
    let mut edge_ended = vec![BigUint::zero()];
    let mut arc_ended = vec![BigUint::one()];
    for i in 1..=k as usize {
        let (pa, pb) = (&edge_ended[i - 1], &arc_ended[i - 1]);
        let a = &r_big * pb + BigUint::from(r.saturating_sub(1)) * pa;
        let b = &z_big * (pa + pb);
        edge_ended.push(a);
        arc_ended.push(b);
    }
    let levels = LevelCounts { edge_ended, arc_ended };
    MooreBound {
        r,
        z,
        k,
        bound: levels.total(),
        levels,
        degenerate_parameters: r == 0 || z == 0,
    }
}

/// `(r + z)² + z + 1`.
pub fn moore_bound_k2(r: u64, z: u64) -> BigUint {
    let s = BigUint::from(r + z);
    &s * &s + BigUint::from(z) + BigUint::one()
}

/// An element `p + q√d` of ℚ(√d). When `d` is a perfect square the
/// element is kept in rational form (`q = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSurd {
    pub rational: BigRational,
    pub surd: BigRational,
    pub radicand: BigInt,
}

impl QuadSurd {
    fn rational(value: BigRational, radicand: &BigInt) -> Self {
        QuadSurd {
            rational: value,
            surd: BigRational::zero(),
            radicand: radicand.clone(),
        }
    }

    /// `√d` itself, collapsed to an integer for square `d`.
    fn root(radicand: &BigInt) -> Self {
        let s = radicand.sqrt();
        if &s * &s == *radicand {
            Self::rational(BigRational::from_integer(s), radicand)
        } else {
            QuadSurd {
                rational: BigRational::zero(),
                surd: BigRational::one(),
                radicand: radicand.clone(),
            }
        }
    }

    fn int(v: i64, radicand: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)), radicand)
    }

    fn add(&self, o: &Self) -> Self {
        QuadSurd {
            rational: &self.rational + &o.rational,
            surd: &self.surd + &o.surd,
            radicand: self.radicand.clone(),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        QuadSurd {
            rational: &self.rational - &o.rational,
            surd: &self.surd - &o.surd,
            radicand: self.radicand.clone(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let d = BigRational::from_integer(self.radicand.clone());
        QuadSurd {
            rational: &self.rational * &o.rational + &self.surd * &o.surd * d,
            surd: &self.rational * &o.surd + &self.surd * &o.rational,
            radicand: self.radicand.clone(),
        }
    }

    fn scale(&self, c: &BigRational) -> Self {
        QuadSurd {
            rational: &self.rational * c,
            surd: &self.surd * c,
            radicand: self.radicand.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = BigRational::from_integer(self.radicand.clone());
        let norm = &self.rational * &self.rational - &self.surd * &self.surd * d;
        // nonzero: d is not a square whenever surd != 0
        Some(QuadSurd {
            rational: &self.rational / &norm,
            surd: -&self.surd / &norm,
            radicand: self.radicand.clone(),
        })
    }

    fn pow(&self, e: u64) -> Self {
        let mut acc = Self::int(1, &self.radicand);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Floating point approximation, for display.
    pub fn approx(&self) -> f64 {
        let d = self.radicand.to_f64().unwrap_or(f64::NAN);
        self.rational.to_f64().unwrap_or(f64::NAN) + self.surd.to_f64().unwrap_or(f64::NAN) * d.sqrt()
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.surd.is_zero() && self.rational.is_integer()).then(|| self.rational.to_integer())
    }
}

/// The closed-form ingredients v, u₁, u₂, A, B, and the exact closed-form
/// value (absent when a root equals 1 and the geometric sum degenerates).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreBoundTerms {
    pub discriminant: BigInt,
    pub u1: QuadSurd,
    pub u2: QuadSurd,
    pub a: QuadSurd,
    pub b: QuadSurd,
    pub closed_form: Option<QuadSurd>,
    pub bound: BigUint,
}

impl MooreBoundTerms {
    /// The closed form reproduces the recurrence value exactly.
    /// `None` when the closed form was skipped at a degenerate point.
    pub fn agrees(&self) -> Option<bool> {
        let value = self.closed_form.as_ref()?;
        Some(value.as_integer() == Some(BigInt::from(self.bound.clone())))
    }
}

pub fn moore_bound_terms(r: u64, z: u64, k: u64) -> MooreBoundTerms {
    let (ri, zi) = (r as i64, z as i64);
    let v = BigInt::from((zi + ri) * (zi + ri) + 2 * (zi - ri) + 1);
    let sqrt_v = QuadSurd::root(&v);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = QuadSurd::int(zi + ri - 1, &v);
    let u1 = base.sub(&sqrt_v).scale(&half);
    let u2 = base.add(&sqrt_v).scale(&half);
    let s = QuadSurd::int(zi + ri + 1, &v);
    let two_sqrt = sqrt_v.scale(&BigRational::from_integer(BigInt::from(2)));
    let inv = two_sqrt.inverse().expect("v > 0 for r, z >= 0");
    let a = sqrt_v.sub(&s).mul(&inv);
    let b = sqrt_v.add(&s).mul(&inv);

    let one = QuadSurd::int(1, &v);
    let geometric = |u: &QuadSurd| -> Option<QuadSurd> {
        let denom = u.sub(&one).inverse()?;
        Some(u.pow(k + 1).sub(&one).mul(&denom))
    };
    let closed_form = match (geometric(&u1), geometric(&u2)) {
        (Some(g1), Some(g2)) => Some(a.mul(&g1).add(&b.mul(&g2))),
        _ => None,
    };
    MooreBoundTerms {
        discriminant: v,
        u1,
        u2,
        a,
        b,
        closed_form,
        bound: moore_bound(r, z, k).bound,
    }
}

/// Order and parity verdict for a hypothetical (1,1,k;−1)-graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order11k {
    pub k: u64,
    pub order: BigUint,
    pub parity_feasible: bool,
}

/// Fibonacci numbers with `F₀ = F₁ = 1`.
pub fn fibonacci(i: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..i {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Order `F_{k+3} − 3`; infeasible exactly when that order is odd, since
/// undirected degree 1 everywhere means the edges form a perfect matching.
pub fn order_11k(k: u64) -> Order11k {
    let order = fibonacci(k + 3) - BigUint::from(3u32);
    let parity_feasible = (&order % 2u32).is_zero();
    Order11k { k, order, parity_feasible }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralVerdict {
    pub z: u64,
    pub order: BigUint,
    /// `2z + 5`, the integer square root of `4n + 9`.
    pub discriminant_root: BigUint,
    pub square_identity_holds: bool,
    /// The four possible eigenvalue sums, in the order
    /// `z+3−n/2, z+2−n/2, −z−2−n/2, −z−3−n/2`.
    pub sums: [BigRational; 4],
    pub infeasible: bool,
}

/// Trace test for a non-totally-regular (2, z, 2; −1)-graph of order
/// `n = z² + 5z + 4`: the adjacency trace is zero, so one of the four
/// candidate eigenvalue sums would have to vanish.
pub fn spectral_infeasibility_defect1(z: u64) -> SpectralVerdict {
    let zb = BigInt::from(z);
    let n: BigInt = &zb * &zb + BigInt::from(5) * &zb + BigInt::from(4);
    let root = BigInt::from(2) * &zb + BigInt::from(5);
    let square_identity_holds = BigInt::from(4) * &n + BigInt::from(9) == &root * &root;
    let half_n = BigRational::new(n.clone(), BigInt::from(2));
    let zr = BigRational::from_integer(zb);
    let c = |k: i64| BigRational::from_integer(BigInt::from(k));
    let sums = [
        &zr + c(3) - &half_n,
        &zr + c(2) - &half_n,
        -&zr - c(2) - &half_n,
        -&zr - c(3) - &half_n,
    ];
    let infeasible = sums.iter().all(|s| !s.is_zero());
    SpectralVerdict {
        z,
        order: n.magnitude().clone(),
        discriminant_root: root.abs().magnitude().clone(),
        square_identity_holds,
        sums,
        infeasible,
    }
}
