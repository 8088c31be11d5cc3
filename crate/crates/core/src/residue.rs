//! Arithmetic of `(Z/mZ)^x`: Dirichlet characters with conductor and
//! prime-power decomposition, classical Gauss and Jacobi sums, the p-adic
//! character lift, and CRT splitting for forms.
//!
//! Characters are stored by generator-exponent data on each cyclic factor of
//! `(Z/p^cZ)^x` (two factors for `p = 2, c >= 3`), so every value is an exact
//! root of unity. Discrete logs are table-driven; moduli here are tiny.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num::Complex;
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::cyclotomic::{Cyclo, RootOfUnity};
use crate::forms::Form;
use crate::ring::{euler_phi, factorize, gcd_u64, pow_mod, Zn};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResidueError {
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("character is not defined at the requested argument")]
    BadArgument,
}

/// One cyclic factor of a unit group, with a full discrete-log table.
#[derive(Clone, Debug)]
pub struct CyclicFactor {
    pub generator: u64,
    pub order: u64,
}

/// Unit group structure of `(Z/p^cZ)^x`.
#[derive(Clone, Debug)]
pub struct PrimePowerUnits {
    pub p: u64,
    pub c: u32,
    pub modulus: u64,
    pub factors: Vec<CyclicFactor>,
    /// residue -> exponent vector on `factors`; `None` for non-units
    dlog: Vec<Option<Vec<u64>>>,
}

impl PrimePowerUnits {
    fn build(p: u64, c: u32) -> Self {
        let modulus = p.pow(c);
        let factors: Vec<CyclicFactor> = if p == 2 {
            match c {
                1 => vec![],
                2 => vec![CyclicFactor { generator: 3, order: 2 }],
                _ => vec![
                    CyclicFactor { generator: modulus - 1, order: 2 },
                    CyclicFactor { generator: 5, order: modulus / 4 },
                ],
            }
        } else {
            vec![CyclicFactor {
                generator: primitive_root_mod_ppow(p, c),
                order: euler_phi(modulus),
            }]
        };
        let mut dlog = vec![None; modulus as usize];
        match factors.len() {
            0 => {
                dlog[1 % modulus as usize] = Some(vec![]);
            }
            1 => {
                let g = factors[0].generator;
                let mut x = 1u64;
                for k in 0..factors[0].order {
                    dlog[x as usize] = Some(vec![k]);
                    x = x * g % modulus;
                }
            }
            _ => {
                let (g0, n0) = (factors[0].generator, factors[0].order);
                let (g1, n1) = (factors[1].generator, factors[1].order);
                let mut x0 = 1u64;
                for i in 0..n0 {
                    let mut x = x0;
                    for j in 0..n1 {
                        dlog[x as usize] = Some(vec![i, j]);
                        x = x * g1 % modulus;
                    }
                    x0 = x0 * g0 % modulus;
                }
            }
        }
        PrimePowerUnits { p, c, modulus, factors, dlog }
    }

    pub fn dlog(&self, t: u64) -> Option<&Vec<u64>> {
        self.dlog[(t % self.modulus) as usize].as_ref()
    }
}

fn primitive_root_mod_ppow(p: u64, c: u32) -> u64 {
    let qs: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    let mut g = 2;
    'outer: loop {
        for &q in &qs {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                g += 1;
                continue 'outer;
            }
        }
        break;
    }
    if c == 1 {
        return g;
    }
    // ensure g stays primitive modulo p^2 (then for every power)
    if pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// Full unit-group data of `(Z/mZ)^x`, one part per prime power.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub m: u64,
    pub parts: Vec<PrimePowerUnits>,
}

static UNIT_CACHE: Lazy<Mutex<HashMap<u64, Arc<UnitGroup>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn unit_group(m: u64) -> Arc<UnitGroup> {
    let mut cache = UNIT_CACHE.lock().unwrap();
    if let Some(u) = cache.get(&m) {
        return u.clone();
    }
    let parts = factorize(m)
        .into_iter()
        .map(|(p, c)| PrimePowerUnits::build(p, c))
        .collect();
    let u = Arc::new(UnitGroup { m, parts });
    cache.insert(m, u.clone());
    u
}

/// A Dirichlet character modulo `modulus`, by exponent data per cyclic factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DirichletCharacter {
    pub modulus: u64,
    /// exponents, grouped per prime-power part in `unit_group(modulus)` order
    pub exps: Vec<Vec<u64>>,
    pub order: u64,
    pub conductor: u64,
}

impl DirichletCharacter {
    pub fn from_exps(modulus: u64, exps: Vec<Vec<u64>>) -> Self {
        let ug = unit_group(modulus);
        let mut order = 1u64;
        for (part, es) in ug.parts.iter().zip(exps.iter()) {
            for (f, &e) in part.factors.iter().zip(es.iter()) {
                order = num::integer::lcm(order, f.order / gcd_u64(f.order, e));
            }
        }
        let conductor = conductor_of(&ug, &exps);
        DirichletCharacter { modulus, exps, order, conductor }
    }

    pub fn principal(modulus: u64) -> Self {
        let ug = unit_group(modulus);
        let exps = ug.parts.iter().map(|p| vec![0u64; p.factors.len()]).collect();
        DirichletCharacter::from_exps(modulus, exps)
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// Exact value at `t`; `None` marks `gcd(t, modulus) > 1`.
    pub fn value(&self, t: i64) -> Option<RootOfUnity> {
        let ug = unit_group(self.modulus);
        let tm = t.rem_euclid(self.modulus as i64) as u64;
        let mut acc = RootOfUnity::one();
        for (part, es) in ug.parts.iter().zip(self.exps.iter()) {
            let ks = part.dlog(tm % part.modulus)?;
            for ((f, &e), &k) in part.factors.iter().zip(es.iter()).zip(ks.iter()) {
                acc = acc.mul(&RootOfUnity::new(f.order, (e % f.order) * k % f.order));
            }
        }
        Some(acc)
    }

    pub fn value_complex(&self, t: i64) -> Complex<f64> {
        self.value(t)
            .map(|r| r.to_complex())
            .unwrap_or_else(|| Complex::new(0.0, 0.0))
    }

    /// Inverse (conjugate) character.
    pub fn inverse(&self) -> Self {
        let ug = unit_group(self.modulus);
        let exps = ug
            .parts
            .iter()
            .zip(self.exps.iter())
            .map(|(part, es)| {
                part.factors
                    .iter()
                    .zip(es.iter())
                    .map(|(f, &e)| (f.order - e % f.order) % f.order)
                    .collect()
            })
            .collect();
        DirichletCharacter::from_exps(self.modulus, exps)
    }

    /// `chi^k`.
    pub fn pow(&self, k: u64) -> Self {
        let ug = unit_group(self.modulus);
        let exps = ug
            .parts
            .iter()
            .zip(self.exps.iter())
            .map(|(part, es)| {
                part.factors
                    .iter()
                    .zip(es.iter())
                    .map(|(f, &e)| e * (k % f.order) % f.order)
                    .collect()
            })
            .collect();
        DirichletCharacter::from_exps(self.modulus, exps)
    }

    /// The primitive character of modulus `conductor` inducing this one.
    pub fn primitive_core(&self) -> DirichletCharacter {
        if self.is_primitive() {
            return self.clone();
        }
        for cand in all_characters(self.conductor) {
            if !cand.is_primitive() {
                continue;
            }
            if characters_agree(self, &cand) {
                return cand;
            }
        }
        unreachable!("primitive core must exist");
    }

    /// The p-part `chi_p` of the primitive core, a character mod `p^{c_p}`.
    pub fn p_component(&self, p: u64) -> DirichletCharacter {
        let core = self.primitive_core();
        let ug = unit_group(core.modulus);
        for (part, es) in ug.parts.iter().zip(core.exps.iter()) {
            if part.p == p {
                return DirichletCharacter::from_exps(part.modulus, vec![es.clone()]);
            }
        }
        DirichletCharacter::principal(1)
    }

    /// `chi_p' = prod_{q != p} chi_q`, evaluated at `t`.
    pub fn prime_to_p_value(&self, p: u64, t: i64) -> Option<RootOfUnity> {
        let core = self.primitive_core();
        let ug = unit_group(core.modulus);
        let mut acc = RootOfUnity::one();
        for (part, es) in ug.parts.iter().zip(core.exps.iter()) {
            if part.p == p {
                continue;
            }
            let ks = part.dlog(t.rem_euclid(part.modulus as i64) as u64 % part.modulus)?;
            for ((f, &e), &k) in part.factors.iter().zip(es.iter()).zip(ks.iter()) {
                acc = acc.mul(&RootOfUnity::new(f.order, (e % f.order) * k % f.order));
            }
        }
        Some(acc)
    }

    /// Conductor exponent `c_p` at `p`.
    pub fn conductor_exponent(&self, p: u64) -> u32 {
        let mut c = 0;
        let mut m = self.conductor;
        while m % p == 0 {
            m /= p;
            c += 1;
        }
        c
    }
}

fn conductor_of(ug: &UnitGroup, exps: &[Vec<u64>]) -> u64 {
    let mut cond = 1u64;
    for (part, es) in ug.parts.iter().zip(exps.iter()) {
        if part.p == 2 {
            let mut local = 1u64;
            if part.c >= 2 {
                // factor 0 is <-1> when c >= 3, or <3 (order 2)> when c == 2
                if part.c == 2 {
                    if es[0] % 2 == 1 {
                        local = 4;
                    }
                } else {
                    let e_minus = es[0] % part.factors[0].order;
                    let o5 = part.factors[1].order / gcd_u64(part.factors[1].order, es[1]);
                    if o5 > 1 {
                        local = 4 * o5;
                    } else if e_minus == 1 {
                        local = 4;
                    }
                }
            }
            cond *= local;
        } else {
            let f = &part.factors[0];
            let o = f.order / gcd_u64(f.order, es[0]);
            if o > 1 {
                // smallest c' with o | phi(p^{c'})
                let mut cc = 1;
                while euler_phi(part.p.pow(cc)) % o != 0 {
                    cc += 1;
                }
                cond *= part.p.pow(cc);
            }
        }
    }
    cond
}

fn characters_agree(a: &DirichletCharacter, b: &DirichletCharacter) -> bool {
    let m = num::integer::lcm(a.modulus, b.modulus);
    for t in 1..=m {
        if gcd_u64(t, m) == 1 && a.value(t as i64) != b.value(t as i64) {
            return false;
        }
    }
    true
}

/// All `phi(m)` Dirichlet characters modulo `m`.
pub fn all_characters(m: u64) -> Vec<DirichletCharacter> {
    let ug = unit_group(m);
    let mut out = vec![];
    let sizes: Vec<u64> = ug
        .parts
        .iter()
        .flat_map(|p| p.factors.iter().map(|f| f.order))
        .collect();
    let total: u64 = sizes.iter().product::<u64>().max(1);
    for mut idx in 0..total {
        let mut flat = vec![];
        for &s in &sizes {
            flat.push(idx % s);
            idx /= s;
        }
        let mut exps = vec![];
        let mut pos = 0;
        for part in &ug.parts {
            let k = part.factors.len();
            exps.push(flat[pos..pos + k].to_vec());
            pos += k;
        }
        out.push(DirichletCharacter::from_exps(m, exps));
    }
    out
}

/// Gauss sum `tau_n(chi) = sum_{t in (Z/n)^x} chi(t) e(t/n)`, exact.
/// `chi` is regarded modulo `n` (a multiple of its modulus).
pub fn gauss_sum(chi: &DirichletCharacter, n: u64) -> Cyclo {
    assert_eq!(n % chi.modulus, 0);
    let big = num::integer::lcm(n, chi.order) as u32;
    let mut acc = Cyclo::zero(big);
    for t in 1..=n {
        if gcd_u64(t, n) != 1 {
            continue;
        }
        if let Some(v) = chi.value(t as i64) {
            let term = v.to_cyclo(big).rotate((t * (big as u64 / n)) as i64);
            acc = acc.add(&term);
        }
    }
    acc
}

/// Jacobi sum `J(chi, chi) = sum_{t != 0, 1} chi(t) chi(1 - t)`, exact.
pub fn jacobi_sum(chi: &DirichletCharacter) -> Result<Cyclo, ResidueError> {
    if chi.pow(2).is_principal() {
        return Err(ResidueError::BadArgument);
    }
    let m = chi.modulus;
    let ord = chi.order as u32;
    let mut acc = Cyclo::zero(ord);
    for t in 2..m {
        let (Some(a), Some(b)) = (chi.value(t as i64), chi.value(1 - t as i64)) else {
            continue;
        };
        acc = acc.add(&a.mul(&b).to_cyclo(ord));
    }
    Ok(acc)
}

/// `t in Q_p^x` known to the precision chi-tilde needs: `t = p^val * unit`.
#[derive(Clone, Copy, Debug)]
pub struct PadicUnitClass {
    pub p: u64,
    pub val: i64,
    pub unit: u64,
}

/// The local lift `chi~_p(t) = chi_p(unit(t)) * (chi_p'(p)^{-1})^{val(t)}`.
pub fn lift_chi_p(
    chi: &DirichletCharacter,
    p: u64,
    t: PadicUnitClass,
) -> Result<RootOfUnity, ResidueError> {
    assert_eq!(t.p, p);
    let chi_p = chi.p_component(p);
    let unit_part = chi_p.value(t.unit as i64).ok_or(ResidueError::BadArgument)?;
    let at_p = chi
        .prime_to_p_value(p, p as i64)
        .ok_or(ResidueError::BadArgument)?;
    Ok(unit_part.mul(&at_p.inv().pow(t.val)))
}

/// Split a form mod `N` into components mod the pairwise coprime `factors`.
pub fn crt_split(a: &Form<Zn>, n: u64, factors: &[u64]) -> Result<Vec<Form<Zn>>, ResidueError> {
    let prod: u64 = factors.iter().product();
    if prod != n {
        return Err(ResidueError::NotCoprime);
    }
    for (i, &x) in factors.iter().enumerate() {
        for &y in &factors[i + 1..] {
            if gcd_u64(x, y) != 1 {
                return Err(ResidueError::NotCoprime);
            }
        }
    }
    Ok(factors
        .iter()
        .map(|&ni| Form { c: a.c.map(|x| x % ni) })
        .collect())
}

/// Inverse of [`crt_split`].
pub fn crt_combine(parts: &[(Form<Zn>, u64)]) -> Result<Form<Zn>, ResidueError> {
    let n: u64 = parts.iter().map(|(_, m)| m).product();
    let mut c = [0u64; 4];
    for (form, ni) in parts {
        let m = n / ni;
        let mi = crate::ring::inv_mod(m % ni, *ni).ok_or(ResidueError::NotCoprime)?;
        for k in 0..4 {
            c[k] = (c[k] + form.c[k] % ni * mi % n * (m % n)) % n;
        }
    }
    Ok(Form { c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::render_cyclo;

    #[test]
    fn character_counts_and_orders() {
        assert_eq!(all_characters(1).len(), 1);
        let five = all_characters(5);
        assert_eq!(five.len(), 4);
        let mut orders: Vec<u64> = five.iter().map(|c| c.order).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 4, 4]);

        let nine = all_characters(9);
        assert_eq!(nine.len(), 6);
        assert_eq!(nine.iter().filter(|c| c.order == 3).count(), 2);
    }

    #[test]
    fn conductors_mod_12() {
        // mod 12: characters have conductors 1, 3, 4, 12
        let mut conds: Vec<u64> = all_characters(12).iter().map(|c| c.conductor).collect();
        conds.sort();
        assert_eq!(conds, vec![1, 3, 4, 12]);
    }

    #[test]
    fn orthogonality_small_moduli() {
        for m in 1..=36u64 {
            let chars = all_characters(m);
            let phi = euler_phi(m);
            for a in &chars {
                for b in &chars {
                    let mut acc = Cyclo::zero(num::integer::lcm(a.order, b.order) as u32);
                    for t in 0..m.max(1) {
                        if gcd_u64(t.max(1) % m.max(1), m.max(1)) != 1 && m > 1 {
                            continue;
                        }
                        let t = if m == 1 { 1 } else { t };
                        let (Some(x), Some(y)) = (a.value(t as i64), b.value(t as i64)) else {
                            continue;
                        };
                        acc = acc.add(&x.mul(&y.inv()).to_cyclo(acc.order));
                        if m == 1 {
                            break;
                        }
                    }
                    let expected = if a == b { phi as i64 } else { 0 };
                    assert!(
                        acc.eq_integer(expected),
                        "orthogonality failed m={m} got {}",
                        render_cyclo(&acc)
                    );
                }
            }
        }
    }

    #[test]
    fn quadratic_gauss_sum_mod5() {
        let chi = all_characters(5).into_iter().find(|c| c.order == 2).unwrap();
        let tau = gauss_sum(&chi, 5);
        let v = tau.to_complex();
        assert!((v.re - 5f64.sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn gauss_sum_modulus_primitive() {
        for m in 2..=36u64 {
            for chi in all_characters(m).iter().filter(|c| c.is_primitive()) {
                let tau = gauss_sum(chi, m);
                let norm = tau.mul(&tau.conj());
                assert!(
                    norm.eq_integer(m as i64),
                    "|tau|^2 != m for modulus {m}, order {}",
                    chi.order
                );
            }
        }
    }

    #[test]
    fn gauss_sum_decomposition_n15() {
        // tau_N(chi) = prod chi_i(N/N_i) tau_{N_i}(chi_i) for N = 15
        for chi in all_characters(15) {
            if !chi.is_primitive() {
                continue;
            }
            let tau = gauss_sum(&chi, 15);
            let chi3 = chi.p_component(3);
            let chi5 = chi.p_component(5);
            let t3 = gauss_sum(&chi3, 3);
            let t5 = gauss_sum(&chi5, 5);
            let u3 = chi3.value(5).unwrap();
            let u5 = chi5.value(3).unwrap();
            let m = num::integer::lcm(tau.order as u64, 60) as u32;
            let rhs = t3
                .mul(&t5)
                .mul(&u3.mul(&u5).to_cyclo(m));
            assert!(tau.lift(m).eq(&rhs.lift(m)));
        }
    }

    #[test]
    fn jacobi_cubic_mod7() {
        let chi = all_characters(7).into_iter().find(|c| c.order == 3).unwrap();
        let j = jacobi_sum(&chi).unwrap();
        // J(chi,chi) = tau(chi)^3 / 7 for cubic chi
        let tau = gauss_sum(&chi, 7);
        let tau3 = tau.mul(&tau).mul(&tau);
        assert!(tau3.eq(&j.scale_int(7).lift(tau3.order)));
        // |J| = sqrt(7)
        let jc = j.to_complex();
        assert!((jc.norm() - 7f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn jacobi_brute_force_vs_tau_quotient_p13() {
        let chi = all_characters(13).into_iter().find(|c| c.order == 3).unwrap();
        let j = jacobi_sum(&chi).unwrap();
        let tau = gauss_sum(&chi, 13);
        let tau3 = tau.mul(&tau).mul(&tau);
        assert!(tau3.eq(&j.scale_int(13).lift(tau3.order)));
    }

    #[test]
    fn character_decomposition_m_le_100() {
        for m in 2..=100u64 {
            let chars = all_characters(m);
            for chi in chars.iter().take(8) {
                let core = chi.primitive_core();
                for t in 1..m {
                    if gcd_u64(t, m) != 1 {
                        continue;
                    }
                    // chi(t) = prod_p chi_p(t)
                    let mut acc = RootOfUnity::one();
                    for (p, _) in factorize(core.modulus) {
                        let cp = chi.p_component(p);
                        acc = acc.mul(&cp.value(t as i64).unwrap());
                    }
                    assert_eq!(chi.value(t as i64).unwrap(), acc, "m={m} t={t}");
                }
            }
        }
    }

    #[test]
    fn lift_chi_p_examples() {
        // t = 1 -> 1
        let chi = all_characters(7).into_iter().find(|c| c.order == 3).unwrap();
        let one = lift_chi_p(&chi, 5, PadicUnitClass { p: 5, val: 0, unit: 1 }).unwrap();
        assert!(one.is_one());
        // chi unramified at p, t = p: chi~_p(p) = chi(p)^{-1}
        let v = lift_chi_p(&chi, 5, PadicUnitClass { p: 5, val: 1, unit: 1 }).unwrap();
        assert_eq!(v, chi.value(5).unwrap().inv());
        // chi cubic mod 9, p = 3, t = 3: chi_3' trivial so value 1
        let chi9 = all_characters(9).into_iter().find(|c| c.order == 3).unwrap();
        let v = lift_chi_p(&chi9, 3, PadicUnitClass { p: 3, val: 1, unit: 1 }).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn crt_split_combine() {
        let r15 = Zn::new(15);
        let a = Form::new(&r15, [7, 0, 0, 0]);
        let parts = crt_split(&a, 15, &[3, 5]).unwrap();
        assert_eq!(parts[0].c, [1, 0, 0, 0]);
        assert_eq!(parts[1].c, [2, 0, 0, 0]);
        let back = crt_combine(&[(parts[0].clone(), 3), (parts[1].clone(), 5)]).unwrap();
        assert_eq!(back.c, a.c);
        assert!(crt_split(&a, 15, &[3, 6]).is_err());
    }

    #[test]
    fn crt_respects_disc() {
        use crate::forms::disc;
        let r15 = Zn::new(15);
        for seed in 0..100u64 {
            let mut s = seed;
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                ((s >> 33) % 15) as i64
            };
            let a = Form::new(&r15, [next(), next(), next(), next()]);
            let d = disc(&r15, &a);
            for (part, ni) in crt_split(&a, 15, &[3, 5]).unwrap().iter().zip([3u64, 5]) {
                let rn = Zn::new(ni);
                assert_eq!(disc(&rn, part), d % ni);
            }
        }
    }
}
