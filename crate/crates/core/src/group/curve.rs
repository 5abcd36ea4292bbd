//! Short-Weierstrass arithmetic for prime192v1 (a = -3, cofactor 1).
//!
//! Points are stored affine; scalar multiplication runs in Jacobian
//! coordinates with a constant-shape double-and-add ladder (every bit costs
//! one doubling and one addition, with a data-dependent select). Hardening
//! beyond that fixed shape is out of scope.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EcPoint {
    Infinity,
    Affine { x: BigUint, y: BigUint },
}

#[derive(Clone)]
pub struct CurveParams {
    /// Field prime.
    pub p: BigUint,
    /// Coefficient a = p - 3.
    pub a: BigUint,
    pub b: BigUint,
    /// Group order (prime, cofactor 1).
    pub order: BigUint,
    pub base: EcPoint,
}

pub fn prime192v1() -> CurveParams {
    let p = hex("fffffffffffffffffffffffffffffffeffffffffffffffff");
    let a = &p - 3u32;
    let b = hex("64210519e59c80e70fa7e9ab72243049feb8deecc146b9b1");
    let order = hex("ffffffffffffffffffffffff99def836146bc9b1b4d22831");
    let base = EcPoint::Affine {
        x: hex("188da80eb03090f67cbf20eb43a18800f4ff0afd82ff1012"),
        y: hex("07192b95ffc8da78631011ed6b24cdd573f977a11e794811"),
    };
    CurveParams { p, a, b, order, base }
}

fn hex(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 16).expect("valid hex constant")
}

/// Jacobian triple (X, Y, Z) with affine x = X/Z², y = Y/Z³. Z = 0 is the
/// point at infinity.
struct Jacobian {
    x: BigUint,
    y: BigUint,
    z: BigUint,
}

impl Jacobian {
    fn infinity() -> Jacobian {
        Jacobian {
            x: BigUint::one(),
            y: BigUint::one(),
            z: BigUint::zero(),
        }
    }

    fn is_infinity(&self) -> bool {
        self.z.is_zero()
    }

    fn from_affine(pt: &EcPoint) -> Jacobian {
        match pt {
            EcPoint::Infinity => Jacobian::infinity(),
            EcPoint::Affine { x, y } => Jacobian {
                x: x.clone(),
                y: y.clone(),
                z: BigUint::one(),
            },
        }
    }
}

impl CurveParams {
    pub fn on_curve(&self, x: &BigUint, y: &BigUint) -> bool {
        let lhs = (y * y) % &self.p;
        let rhs = ((x * x % &self.p) * x + &self.a * x + &self.b) % &self.p;
        lhs == rhs
    }

    /// Deterministically lift an x-coordinate candidate to a point, if the
    /// cubic has a square root (p ≡ 3 mod 4, so sqrt = rhs^((p+1)/4)).
    pub fn lift_x(&self, x: &BigUint) -> Option<EcPoint> {
        let rhs = ((x * x % &self.p) * x + &self.a * x + &self.b) % &self.p;
        let exp: BigUint = (&self.p + 1u32) >> 2;
        let y = rhs.modpow(&exp, &self.p);
        if (&y * &y) % &self.p == rhs {
            Some(EcPoint::Affine { x: x.clone(), y })
        } else {
            None
        }
    }

    pub fn negate(&self, pt: &EcPoint) -> EcPoint {
        match pt {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine { x, y } => EcPoint::Affine {
                x: x.clone(),
                y: if y.is_zero() {
                    BigUint::zero()
                } else {
                    &self.p - y
                },
            },
        }
    }

    pub fn add(&self, a: &EcPoint, b: &EcPoint) -> EcPoint {
        let j = self.jac_add(&Jacobian::from_affine(a), b);
        self.to_affine(&j)
    }

    pub fn scalar_mul(&self, pt: &EcPoint, k: &BigUint) -> EcPoint {
        if k.is_zero() || matches!(pt, EcPoint::Infinity) {
            return EcPoint::Infinity;
        }
        let mut acc = Jacobian::infinity();
        let bits = k.bits();
        for i in (0..bits).rev() {
            acc = self.jac_double(&acc);
            let with_base = self.jac_add(&acc, pt);
            if k.bit(i) {
                acc = with_base;
            }
        }
        self.to_affine(&acc)
    }

    fn mod_p(&self, v: BigUint) -> BigUint {
        v % &self.p
    }

    fn sub_p(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - ((b - a) % &self.p)
        }
    }

    fn jac_double(&self, pt: &Jacobian) -> Jacobian {
        if pt.is_infinity() || pt.y.is_zero() {
            return Jacobian::infinity();
        }
        let p = &self.p;
        // a = -3 doubling: E = 3(X - Z²)(X + Z²)
        let zz = self.mod_p(&pt.z * &pt.z);
        let x_minus = self.sub_p(&pt.x, &zz);
        let x_plus = self.mod_p(&pt.x + &zz);
        let e = self.mod_p(BigUint::from(3u32) * x_minus * x_plus % p);
        let yy = self.mod_p(&pt.y * &pt.y);
        let v = self.mod_p(BigUint::from(4u32) * &pt.x * &yy % p);
        let x3 = self.sub_p(&self.mod_p(&e * &e), &self.mod_p(2u32 * &v));
        let yyyy8 = self.mod_p(BigUint::from(8u32) * &yy * &yy % p);
        let y3 = self.sub_p(&self.mod_p(&e * self.sub_p(&v, &x3)), &yyyy8);
        let z3 = self.mod_p(BigUint::from(2u32) * &pt.y * &pt.z % p);
        Jacobian { x: x3, y: y3, z: z3 }
    }

    /// Mixed addition: Jacobian + affine.
    fn jac_add(&self, a: &Jacobian, b: &EcPoint) -> Jacobian {
        let (bx, by) = match b {
            EcPoint::Infinity => {
                return Jacobian {
                    x: a.x.clone(),
                    y: a.y.clone(),
                    z: a.z.clone(),
                }
            }
            EcPoint::Affine { x, y } => (x, y),
        };
        if a.is_infinity() {
            return Jacobian::from_affine(b);
        }
        let p = &self.p;
        let zz = self.mod_p(&a.z * &a.z);
        let u2 = self.mod_p(bx * &zz);
        let s2 = self.mod_p(by * &a.z % p * &zz % p);
        let h = self.sub_p(&u2, &a.x);
        let r = self.sub_p(&s2, &a.y);
        if h.is_zero() {
            if r.is_zero() {
                return self.jac_double(a);
            }
            return Jacobian::infinity();
        }
        let hh = self.mod_p(&h * &h);
        let hhh = self.mod_p(&hh * &h);
        let v = self.mod_p(&a.x * &hh);
        let x3 = self.sub_p(
            &self.mod_p(&r * &r),
            &self.mod_p(&hhh + 2u32 * &v),
        );
        let y3 = self.sub_p(
            &self.mod_p(&r * self.sub_p(&v, &x3)),
            &self.mod_p(&a.y * &hhh),
        );
        let z3 = self.mod_p(&a.z * &h);
        Jacobian { x: x3, y: y3, z: z3 }
    }

    fn to_affine(&self, pt: &Jacobian) -> EcPoint {
        if pt.is_infinity() {
            return EcPoint::Infinity;
        }
        let zinv = mod_inv_prime(&pt.z, &self.p);
        let zinv2 = self.mod_p(&zinv * &zinv);
        let zinv3 = self.mod_p(&zinv2 * &zinv);
        EcPoint::Affine {
            x: self.mod_p(&pt.x * &zinv2),
            y: self.mod_p(&pt.y * &zinv3),
        }
    }
}

/// Fermat inversion; p is prime and v is nonzero by construction.
fn mod_inv_prime(v: &BigUint, p: &BigUint) -> BigUint {
    v.modpow(&(p - 2u32), p)
}
