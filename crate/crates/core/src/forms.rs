//! The algebra of binary cubic forms.
//!
//! `V = {x1 u^3 + x2 u^2 v + x3 u v^2 + x4 v^3}` carries the twisted action
//! `(g.x)(u,v) = det(g)^{-1} x((u,v) g)`, under which scalar matrices act by
//! scalar multiplication and the discriminant satisfies
//! `P(g.x) = det(g)^2 P(x)`. The dual space `V*` pairs with `V` through
//! `[x,y] = sum x_i y_i`, and `iota: V* -> V` embeds the dual with
//! `P(iota(y)) = 27 P*(y)`. The Delone-Faddeev construction turns a form into
//! a cubic ring with matching discriminant.

use num::{BigInt, BigRational};
use thiserror::Error;

use crate::ring::{Ring, Zi, Zn};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormsError {
    #[error("group element is not invertible over the coefficient ring")]
    InvalidGroupElement,
    #[error("3 is not invertible in the coefficient ring")]
    ThreeNotInvertible,
}

/// A binary cubic form `x1 u^3 + x2 u^2 v + x3 u v^2 + x4 v^3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Form<R: Ring> {
    pub c: [R::El; 4],
}

/// A point of the dual space in dual coordinates `(y1, y2, y3, y4)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DualForm<R: Ring> {
    pub c: [R::El; 4],
}

/// A 2x2 matrix `(a b; c d)` over the coefficient ring, with its determinant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement<R: Ring> {
    pub m: [R::El; 4],
    pub det: R::El,
}

impl<R: Ring> Form<R> {
    pub fn new(r: &R, c: [i64; 4]) -> Self {
        Form {
            c: [
                r.from_i64(c[0]),
                r.from_i64(c[1]),
                r.from_i64(c[2]),
                r.from_i64(c[3]),
            ],
        }
    }
}

impl<R: Ring> DualForm<R> {
    pub fn new(r: &R, c: [i64; 4]) -> Self {
        DualForm {
            c: [
                r.from_i64(c[0]),
                r.from_i64(c[1]),
                r.from_i64(c[2]),
                r.from_i64(c[3]),
            ],
        }
    }
}

impl<R: Ring> GroupElement<R> {
    pub fn new(r: &R, m: [i64; 4]) -> Self {
        let m = [
            r.from_i64(m[0]),
            r.from_i64(m[1]),
            r.from_i64(m[2]),
            r.from_i64(m[3]),
        ];
        let det = r.sub(&r.mul(&m[0], &m[3]), &r.mul(&m[1], &m[2]));
        GroupElement { m, det }
    }

    pub fn from_els(r: &R, m: [R::El; 4]) -> Self {
        let det = r.sub(&r.mul(&m[0], &m[3]), &r.mul(&m[1], &m[2]));
        GroupElement { m, det }
    }

    pub fn mul(&self, r: &R, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        GroupElement::from_els(
            r,
            [
                r.add(&r.mul(&a[0], &b[0]), &r.mul(&a[1], &b[2])),
                r.add(&r.mul(&a[0], &b[1]), &r.mul(&a[1], &b[3])),
                r.add(&r.mul(&a[2], &b[0]), &r.mul(&a[3], &b[2])),
                r.add(&r.mul(&a[2], &b[1]), &r.mul(&a[3], &b[3])),
            ],
        )
    }
}

/// The 4x4 matrix of the twisted action, before the `det^{-1}` factor.
fn action_rows<R: Ring>(r: &R, g: &GroupElement<R>) -> [[R::El; 4]; 4] {
    let [al, be, ga, de] = g.m.clone();
    let two = r.from_i64(2);
    let three = r.from_i64(3);
    let m2 = |a: &R::El, b: &R::El| r.mul(a, b);
    let m3 = |a: &R::El, b: &R::El, c: &R::El| r.mul(&r.mul(a, b), c);
    [
        [
            m3(&al, &al, &al),
            m3(&al, &al, &be),
            m3(&al, &be, &be),
            m3(&be, &be, &be),
        ],
        [
            r.mul(&three, &m3(&al, &al, &ga)),
            r.add(&m3(&al, &al, &de), &r.mul(&two, &m3(&al, &be, &ga))),
            r.add(&m3(&be, &be, &ga), &r.mul(&two, &m3(&al, &be, &de))),
            r.mul(&three, &m3(&be, &be, &de)),
        ],
        [
            r.mul(&three, &m3(&al, &ga, &ga)),
            r.add(&m3(&be, &ga, &ga), &r.mul(&two, &m3(&al, &ga, &de))),
            r.add(&m3(&al, &de, &de), &r.mul(&two, &m3(&be, &ga, &de))),
            r.mul(&three, &m2(&r.mul(&be, &de), &de)),
        ],
        [
            m3(&ga, &ga, &ga),
            m3(&ga, &ga, &de),
            m3(&ga, &de, &de),
            m3(&de, &de, &de),
        ],
    ]
}

/// The 4x4 matrix of the dual action, before the `det^{-1}` factor.
fn dual_action_rows<R: Ring>(r: &R, g: &GroupElement<R>) -> [[R::El; 4]; 4] {
    let [al, be, ga, de] = g.m.clone();
    let two = r.from_i64(2);
    let three = r.from_i64(3);
    let m3 = |a: &R::El, b: &R::El, c: &R::El| r.mul(&r.mul(a, b), c);
    [
        [
            m3(&de, &de, &de),
            r.neg(&r.mul(&three, &m3(&ga, &de, &de))),
            r.mul(&three, &m3(&ga, &ga, &de)),
            r.neg(&m3(&ga, &ga, &ga)),
        ],
        [
            r.neg(&m3(&be, &de, &de)),
            r.add(&m3(&al, &de, &de), &r.mul(&two, &m3(&be, &ga, &de))),
            r.neg(&r.add(&m3(&be, &ga, &ga), &r.mul(&two, &m3(&al, &ga, &de)))),
            m3(&al, &ga, &ga),
        ],
        [
            m3(&be, &be, &de),
            r.neg(&r.add(&m3(&be, &be, &ga), &r.mul(&two, &m3(&al, &be, &de)))),
            r.add(&m3(&al, &al, &de), &r.mul(&two, &m3(&al, &be, &ga))),
            r.neg(&m3(&al, &al, &ga)),
        ],
        [
            r.neg(&m3(&be, &be, &be)),
            r.mul(&three, &m3(&al, &be, &be)),
            r.neg(&r.mul(&three, &m3(&al, &al, &be))),
            m3(&al, &al, &al),
        ],
    ]
}

fn apply_rows<R: Ring>(r: &R, rows: &[[R::El; 4]; 4], v: &[R::El; 4]) -> [R::El; 4] {
    let mut out = [r.zero(), r.zero(), r.zero(), r.zero()];
    for (i, row) in rows.iter().enumerate() {
        let mut acc = r.zero();
        for (j, e) in row.iter().enumerate() {
            acc = r.add(&acc, &r.mul(e, &v[j]));
        }
        out[i] = acc;
    }
    out
}

/// Twisted action `g . x`. Requires `det g` invertible.
pub fn act<R: Ring>(r: &R, g: &GroupElement<R>, x: &Form<R>) -> Result<Form<R>, FormsError> {
    let di = r.inv(&g.det).ok_or(FormsError::InvalidGroupElement)?;
    let rows = action_rows(r, g);
    let v = apply_rows(r, &rows, &x.c);
    Ok(Form {
        c: v.map(|e| r.mul(&di, &e)),
    })
}

/// Dual action `g * y`, defined by `[x, g*y] = [(det g) g^{-1}.x, y]`.
pub fn act_dual<R: Ring>(
    r: &R,
    g: &GroupElement<R>,
    y: &DualForm<R>,
) -> Result<DualForm<R>, FormsError> {
    let di = r.inv(&g.det).ok_or(FormsError::InvalidGroupElement)?;
    let rows = dual_action_rows(r, g);
    let v = apply_rows(r, &rows, &y.c);
    Ok(DualForm {
        c: v.map(|e| r.mul(&di, &e)),
    })
}

/// Integer twisted action, allowing any `g` for which the `det^{-1}` factor
/// divides exactly (scalar matrices act by scalar multiplication).
pub fn act_z(g: &GroupElement<Zi>, x: &Form<Zi>) -> Result<Form<Zi>, FormsError> {
    if g.det == 0 {
        return Err(FormsError::InvalidGroupElement);
    }
    let rows = action_rows(&Zi, g);
    let v = apply_rows(&Zi, &rows, &x.c);
    let mut out = [0i128; 4];
    for (o, e) in out.iter_mut().zip(v.iter()) {
        if e % g.det != 0 {
            return Err(FormsError::InvalidGroupElement);
        }
        *o = e / g.det;
    }
    Ok(Form { c: out })
}

/// Integer dual action with the same exact-division convention as [`act_z`].
pub fn act_dual_z(g: &GroupElement<Zi>, y: &DualForm<Zi>) -> Result<DualForm<Zi>, FormsError> {
    if g.det == 0 {
        return Err(FormsError::InvalidGroupElement);
    }
    let rows = dual_action_rows(&Zi, g);
    let v = apply_rows(&Zi, &rows, &y.c);
    let mut out = [0i128; 4];
    for (o, e) in out.iter_mut().zip(v.iter()) {
        if e % g.det != 0 {
            return Err(FormsError::InvalidGroupElement);
        }
        *o = e / g.det;
    }
    Ok(DualForm { c: out })
}

/// Discriminant `P(x) = x2^2 x3^2 + 18 x1 x2 x3 x4 - 4 x1 x3^3 - 4 x2^3 x4 - 27 x1^2 x4^2`.
pub fn disc<R: Ring>(r: &R, x: &Form<R>) -> R::El {
    let [a, b, c, d] = &x.c;
    let t1 = r.mul(&r.mul(b, b), &r.mul(c, c));
    let t2 = r.mul(&r.from_i64(18), &r.mul(&r.mul(a, b), &r.mul(c, d)));
    let t3 = r.mul(&r.from_i64(4), &r.mul(a, &r.mul(c, &r.mul(c, c))));
    let t4 = r.mul(&r.from_i64(4), &r.mul(d, &r.mul(b, &r.mul(b, b))));
    let t5 = r.mul(&r.from_i64(27), &r.mul(&r.mul(a, a), &r.mul(d, d)));
    r.sub(&r.sub(&r.sub(&r.add(&t1, &t2), &t3), &t4), &t5)
}

/// Discriminant over arbitrary-precision integers, for inputs past the
/// `i128`-safe coefficient range.
pub fn disc_big(c: &[BigInt; 4]) -> BigInt {
    let [a, b, cc, d] = c;
    b * b * cc * cc + BigInt::from(18) * a * b * cc * d
        - BigInt::from(4) * a * cc * cc * cc
        - BigInt::from(4) * b * b * b * d
        - BigInt::from(27) * a * a * d * d
}

/// Dual discriminant `P*(y) = 3 y2^2 y3^2 + 6 y1 y2 y3 y4 - 4 y1 y3^3 - 4 y2^3 y4 - y1^2 y4^2`.
pub fn dual_disc<R: Ring>(r: &R, y: &DualForm<R>) -> R::El {
    let [a, b, c, d] = &y.c;
    let t1 = r.mul(&r.from_i64(3), &r.mul(&r.mul(b, b), &r.mul(c, c)));
    let t2 = r.mul(&r.from_i64(6), &r.mul(&r.mul(a, b), &r.mul(c, d)));
    let t3 = r.mul(&r.from_i64(4), &r.mul(a, &r.mul(c, &r.mul(c, c))));
    let t4 = r.mul(&r.from_i64(4), &r.mul(d, &r.mul(b, &r.mul(b, b))));
    let t5 = r.mul(&r.mul(a, a), &r.mul(d, d));
    r.sub(&r.sub(&r.sub(&r.add(&t1, &t2), &t3), &t4), &t5)
}

/// Canonical pairing `[x, y] = x1 y1 + x2 y2 + x3 y3 + x4 y4`.
pub fn pairing<R: Ring>(r: &R, x: &Form<R>, y: &DualForm<R>) -> R::El {
    let mut acc = r.zero();
    for (a, b) in x.c.iter().zip(y.c.iter()) {
        acc = r.add(&acc, &r.mul(a, b));
    }
    acc
}

/// The alternating bilinear form on `V` induced by the pairing through `iota`:
/// `[x, x'] = x4 x1' - (1/3) x3 x2' + (1/3) x2 x3' - x1 x4'`.
/// Requires 3 invertible in the coefficient ring.
pub fn bilinear_v<R: Ring>(r: &R, x: &Form<R>, y: &Form<R>) -> Result<R::El, FormsError> {
    let third = r.inv(&r.from_i64(3)).ok_or(FormsError::ThreeNotInvertible)?;
    let t1 = r.mul(&x.c[3], &y.c[0]);
    let t2 = r.mul(&third, &r.mul(&x.c[2], &y.c[1]));
    let t3 = r.mul(&third, &r.mul(&x.c[1], &y.c[2]));
    let t4 = r.mul(&x.c[0], &y.c[3]);
    Ok(r.sub(&r.add(&r.sub(&t1, &t2), &t3), &t4))
}

/// [`bilinear_v`] over the integers, as an exact rational.
pub fn bilinear_v_q(x: &Form<Zi>, y: &Form<Zi>) -> BigRational {
    let n = BigInt::from(3 * (x.c[3] * y.c[0] - x.c[0] * y.c[3]) - x.c[2] * y.c[1] + x.c[1] * y.c[2]);
    BigRational::new(n, BigInt::from(3))
}

/// The embedding `iota: V* -> V`, `(y1,y2,y3,y4) -> (y4, -3 y3, 3 y2, -y1)`.
pub fn iota<R: Ring>(r: &R, y: &DualForm<R>) -> Form<R> {
    let three = r.from_i64(3);
    Form {
        c: [
            y.c[3].clone(),
            r.neg(&r.mul(&three, &y.c[2])),
            r.mul(&three, &y.c[1]),
            r.neg(&y.c[0]),
        ],
    }
}

/// Inverse of `iota` where 3 is invertible: `x -> (-x4, x3/3, -x2/3, x1)`.
pub fn iota_inv_mod(r: &Zn, x: &Form<Zn>) -> Result<DualForm<Zn>, FormsError> {
    let third = r.inv(&r.from_i64(3)).ok_or(FormsError::ThreeNotInvertible)?;
    Ok(DualForm {
        c: [
            r.neg(&x.c[3]),
            r.mul(&third, &x.c[2]),
            r.neg(&r.mul(&third, &x.c[1])),
            x.c[0],
        ],
    })
}

/// Hessian covariant `(x2^2 - 3 x1 x3, x2 x3 - 9 x1 x4, x3^2 - 3 x2 x4)`,
/// a binary quadratic with `disc(H) = -3 P(x)` transforming classically
/// under `SL2`.
pub fn hessian(x: &Form<Zi>) -> (i128, i128, i128) {
    let [a, b, c, d] = x.c;
    (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
}

/// A cubic ring `Z 1 + Z w + Z t` presented by the seven structure constants
/// of `w^2`, `t^2`, `wt` on the Delone-Faddeev normalized basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicRing {
    /// `w^2 = w2[0] + w2[1] w + w2[2] t`
    pub w2: [i128; 3],
    /// `t^2 = t2[0] + t2[1] w + t2[2] t`
    pub t2: [i128; 3],
    /// `wt = wt` (a constant)
    pub wt: i128,
}

/// Delone-Faddeev construction: for `x = (a,b,c,d)`,
/// `w^2 = -ac - b w + a t`, `t^2 = -bd - d w + c t`, `wt = -ad`.
pub fn delone_faddeev(x: &Form<Zi>) -> CubicRing {
    let [a, b, c, d] = x.c;
    CubicRing {
        w2: [-a * c, -b, a],
        t2: [-b * d, -d, c],
        wt: -a * d,
    }
}

impl CubicRing {
    /// Product of `u = u0 + u1 w + u2 t` and `v` in the ring.
    pub fn mul(&self, u: &[i128; 3], v: &[i128; 3]) -> [i128; 3] {
        let ww = self.w2;
        let tt = self.t2;
        let wt = self.wt;
        let c_ww = u[1] * v[1];
        let c_wt = u[1] * v[2] + u[2] * v[1];
        let c_tt = u[2] * v[2];
        [
            u[0] * v[0] + c_ww * ww[0] + c_wt * wt + c_tt * tt[0],
            u[0] * v[1] + u[1] * v[0] + c_ww * ww[1] + c_tt * tt[1],
            u[0] * v[2] + u[2] * v[0] + c_ww * ww[2] + c_tt * tt[2],
        ]
    }

    /// Trace of the regular representation of `u`.
    pub fn trace(&self, u: &[i128; 3]) -> i128 {
        3 * u[0] + self.w2[1] * u[1] + self.t2[2] * u[2]
    }

    /// Ring discriminant, the determinant of the trace form on the basis.
    pub fn disc(&self) -> i128 {
        let basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let mut g = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = self.trace(&self.mul(&basis[i], &basis[j]));
            }
        }
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    }

    /// All nine associativity identities `(e_i e_j) e_k = e_i (e_j e_k)` on
    /// basis vectors (commutativity is built into the multiplication table).
    pub fn is_associative(&self) -> bool {
        let basis = [[1i128, 0, 0], [0, 1, 0], [0, 0, 1]];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let lhs = self.mul(&self.mul(&basis[i], &basis[j]), &basis[k]);
                    let rhs = self.mul(&basis[i], &self.mul(&basis[j], &basis[k]));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Characteristic polynomial `X^3 + c2 X^2 + c1 X + c0` of
    /// multiplication by `u`, returned as `(c2, c1, c0)`.
    pub fn char_poly(&self, u: &[i128; 3]) -> (i128, i128, i128) {
        // columns: u * e_k in basis coordinates
        let cols = [
            self.mul(u, &[1, 0, 0]),
            self.mul(u, &[0, 1, 0]),
            self.mul(u, &[0, 0, 1]),
        ];
        let m = |i: usize, j: usize| cols[j][i];
        let tr = m(0, 0) + m(1, 1) + m(2, 2);
        let minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2)
            - m(0, 2) * m(2, 0)
            + m(1, 1) * m(2, 2)
            - m(1, 2) * m(2, 1);
        let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        (-tr, minors, -det)
    }

    /// Unit-fixing ring endomorphisms `w -> e + a w + c t`, `t -> f + b w + d t`
    /// with matrix entries bounded by `bound`, together with their orders as
    /// automorphisms (`None` when not invertible / not of finite small order).
    pub fn automorphisms_bounded(&self, bound: i128) -> Vec<([i128; 3], [i128; 3], Option<u32>)> {
        let mut out = Vec::new();
        let trw = self.w2[1];
        let trt = self.t2[2];
        for a in -bound..=bound {
            for c in -bound..=bound {
                // trace preservation pins the constant part when divisible
                let en = trw * (1 - a) - c * trt;
                if en % 3 != 0 {
                    continue;
                }
                let e = en / 3;
                for b in -bound..=bound {
                    for d in -bound..=bound {
                        let fn_ = trt * (1 - d) - b * trw;
                        if fn_ % 3 != 0 {
                            continue;
                        }
                        let f = fn_ / 3;
                        let pw = [e, a, c];
                        let pt = [f, b, d];
                        if !self.is_endomorphism(&pw, &pt) {
                            continue;
                        }
                        let order = self.endo_order(&pw, &pt);
                        out.push((pw, pt, order));
                    }
                }
            }
        }
        out
    }

    fn apply_endo(&self, pw: &[i128; 3], pt: &[i128; 3], u: &[i128; 3]) -> [i128; 3] {
        [
            u[0] + u[1] * pw[0] + u[2] * pt[0],
            u[1] * pw[1] + u[2] * pt[1],
            u[1] * pw[2] + u[2] * pt[2],
        ]
    }

    fn is_endomorphism(&self, pw: &[i128; 3], pt: &[i128; 3]) -> bool {
        let lhs_ww = self.mul(pw, pw);
        let rhs_ww = self.apply_endo(pw, pt, &self.w2);
        if lhs_ww != rhs_ww {
            return false;
        }
        let lhs_tt = self.mul(pt, pt);
        let rhs_tt = self.apply_endo(pw, pt, &self.t2);
        if lhs_tt != rhs_tt {
            return false;
        }
        let lhs_wt = self.mul(pw, pt);
        lhs_wt == [self.wt, 0, 0]
    }

    fn endo_order(&self, pw: &[i128; 3], pt: &[i128; 3]) -> Option<u32> {
        let (mut cw, mut ct) = (*pw, *pt);
        for k in 1..=6 {
            if cw == [0, 1, 0] && ct == [0, 0, 1] {
                return Some(k);
            }
            let nw = self.apply_endo(pw, pt, &cw);
            let nt = self.apply_endo(pw, pt, &ct);
            cw = nw;
            ct = nt;
        }
        None
    }
}

/// Reduce an integer form modulo `N`.
pub fn reduce_form(r: &Zn, x: &Form<Zi>) -> Form<Zn> {
    Form {
        c: [
            r.reduce_i128(x.c[0]),
            r.reduce_i128(x.c[1]),
            r.reduce_i128(x.c[2]),
            r.reduce_i128(x.c[3]),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zi_form(c: [i64; 4]) -> Form<Zi> {
        Form::new(&Zi, c)
    }

    #[test]
    fn act_identity_and_scalars() {
        let x = zi_form([1, 2, 3, 4]);
        let id = GroupElement::new(&Zi, [1, 0, 0, 1]);
        assert_eq!(act_z(&id, &x).unwrap(), x);
        // scalar matrices act by scalar multiplication
        let two = GroupElement::new(&Zi, [2, 0, 0, 2]);
        assert_eq!(act_z(&two, &zi_form([1, 0, 0, 0])).unwrap(), zi_form([2, 0, 0, 0]));
        // swap of variables, det = -1
        let swap = GroupElement::new(&Zi, [0, 1, 1, 0]);
        assert_eq!(act_z(&swap, &x).unwrap(), zi_form([-4, -3, -2, -1]));
    }

    #[test]
    fn disc_values() {
        assert_eq!(disc(&Zi, &zi_form([1, 0, 0, 0])), 0);
        assert_eq!(disc(&Zi, &zi_form([0, 1, 1, 0])), 1);
        assert_eq!(disc(&Zi, &zi_form([1, 0, 0, 1])), -27);
        assert_eq!(dual_disc(&Zi, &DualForm::new(&Zi, [1, 0, 0, 0])), 0);
        assert_eq!(dual_disc(&Zi, &DualForm::new(&Zi, [0, 1, 1, 0])), 3);
    }

    #[test]
    fn iota_examples() {
        let y = DualForm::new(&Zi, [1, 0, 0, 0]);
        assert_eq!(iota(&Zi, &y), zi_form([0, 0, 0, -1]));
        // 27-fold discriminant relation on a sample
        let y = DualForm::new(&Zi, [2, -1, 3, 5]);
        let x = iota(&Zi, &y);
        assert_eq!(disc(&Zi, &x), 27 * dual_disc(&Zi, &y));
    }

    #[test]
    fn pairing_arithmetic() {
        let x = zi_form([1, 2, 3, 4]);
        let y = DualForm::new(&Zi, [4, 3, 2, 1]);
        assert_eq!(pairing(&Zi, &x, &y), 20);
        let z = DualForm::new(&Zi, [0, 0, 0, 0]);
        assert_eq!(pairing(&Zi, &x, &z), 0);
    }

    #[test]
    fn bilinear_direct_values() {
        let x = zi_form([0, 0, 0, 1]);
        let y = zi_form([1, 0, 0, 0]);
        assert_eq!(bilinear_v_q(&x, &y), BigRational::from(BigInt::from(1)));
        let r = Zn::new(25);
        let xm = Form::new(&r, [0, 0, 0, 1]);
        let ym = Form::new(&r, [1, 0, 0, 0]);
        assert_eq!(bilinear_v(&r, &xm, &ym).unwrap(), 1);
    }

    #[test]
    fn delone_faddeev_monic_is_polynomial_ring() {
        // x = (1,b,c,d) corresponds to Z[X]/(X^3 + b X^2 + c X + d):
        // the characteristic polynomial of w recovers (b, c, d).
        for (b, c, d) in [(0i64, 0, 1), (2, -1, 3), (-1, 4, -2)] {
            let ring = delone_faddeev(&zi_form([1, b, c, d]));
            assert!(ring.is_associative());
            assert_eq!(
                ring.char_poly(&[0, 1, 0]),
                (b as i128, c as i128, d as i128)
            );
        }
    }

    #[test]
    fn delone_faddeev_explicit_structure() {
        // x = (1,0,0,1): w^2 = t, t^2 = -w, wt = -1
        let ring = delone_faddeev(&zi_form([1, 0, 0, 1]));
        assert_eq!(ring.w2, [0, 0, 1]);
        assert_eq!(ring.t2, [0, -1, 0]);
        assert_eq!(ring.wt, -1);
        assert!(ring.is_associative());
    }

    #[test]
    fn cyclic_cubic_has_order_three_automorphism() {
        // uv(u+v) has SL2(Z)-stabilizer of order 3; its ring must too.
        let ring = delone_faddeev(&zi_form([0, 1, 1, 0]));
        let autos = ring.automorphisms_bounded(2);
        assert!(autos.iter().any(|(_, _, ord)| *ord == Some(3)));
    }

    proptest! {
        #[test]
        fn df_preserves_discriminant(a in -10i64..=10, b in -10i64..=10,
                                     c in -10i64..=10, d in -10i64..=10) {
            let x = zi_form([a, b, c, d]);
            let ring = delone_faddeev(&x);
            prop_assert!(ring.is_associative());
            prop_assert_eq!(ring.disc(), disc(&Zi, &x));
        }

        #[test]
        fn disc_covariance_mod_n(seed in 0u64..5000, n in prop::sample::select(vec![4u64, 5, 9])) {
            let r = Zn::new(n);
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as i64 };
            let x = Form::new(&r, [next(), next(), next(), next()]);
            // find a unit-determinant g
            let g = loop {
                let cand = GroupElement::new(&r, [next(), next(), next(), next()]);
                if r.is_unit(&cand.det) { break cand; }
            };
            let gx = act(&r, &g, &x).unwrap();
            let lhs = disc(&r, &gx);
            let rhs = r.mul(&r.mul(&g.det, &g.det), &disc(&r, &x));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn group_law_and_adjunction_mod7(seed in 0u64..5000) {
            let r = Zn::new(7);
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as i64 };
            let mut unit_g = || loop {
                let cand = GroupElement::new(&r, [next(), next(), next(), next()]);
                if r.is_unit(&cand.det) { break cand; }
            };
            let g = unit_g();
            let h = unit_g();
            let x = Form::new(&r, [next(), next(), next(), next()]);
            let y = DualForm::new(&r, [next(), next(), next(), next()]);

            // act(g, act(h, x)) = act(gh, x)
            let lhs = act(&r, &g, &act(&r, &h, &x).unwrap()).unwrap();
            let rhs = act(&r, &g.mul(&r, &h), &x).unwrap();
            prop_assert_eq!(lhs, rhs);

            // [x, g*y] = [(det g) g^{-1} . x, y]
            let di = r.inv(&g.det).unwrap();
            let ginv_scaled = GroupElement::from_els(
                &r,
                [
                    g.m[3], r.neg(&g.m[1]),
                    r.neg(&g.m[2]), g.m[0],
                ],
            );
            let lhs = pairing(&r, &x, &act_dual(&r, &g, &y).unwrap());
            let rhs = pairing(&r, &act(&r, &ginv_scaled, &x).unwrap(), &y);
            prop_assert_eq!(lhs, rhs);
            let _ = di;
        }

        #[test]
        fn iota_equivariance(seed in 0u64..3000) {
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((s >> 33) % 7) as i64 - 3 };
            let y = DualForm::new(&Zi, [next(), next(), next(), next()]);
            // random det +-1 matrix as product of elementary ones
            let mut g = GroupElement::new(&Zi, [1, 0, 0, 1]);
            for _ in 0..4 {
                let k = next();
                let e = if next() % 2 == 0 {
                    GroupElement::new(&Zi, [1, k, 0, 1])
                } else {
                    GroupElement::new(&Zi, [1, 0, k, 1])
                };
                g = g.mul(&Zi, &e);
            }
            let lhs = iota(&Zi, &act_dual_z(&g, &y).unwrap());
            let rhs = act_z(&g, &iota(&Zi, &y)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bilinear_covariance_mod25(seed in 0u64..3000) {
            let r = Zn::new(25);
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as i64 };
            let x = Form::new(&r, [next(), next(), next(), next()]);
            let y = Form::new(&r, [next(), next(), next(), next()]);
            let g = loop {
                let cand = GroupElement::new(&r, [next(), next(), next(), next()]);
                if r.is_unit(&cand.det) { break cand; }
            };
            // alternating
            prop_assert_eq!(bilinear_v(&r, &x, &x).unwrap(), 0);
            // [gx, gx'] = det(g) [x, x']
            let gx = act(&r, &g, &x).unwrap();
            let gy = act(&r, &g, &y).unwrap();
            let lhs = bilinear_v(&r, &gx, &gy).unwrap();
            let rhs = r.mul(&g.det, &bilinear_v(&r, &x, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
