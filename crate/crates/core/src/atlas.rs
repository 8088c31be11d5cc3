//! Orbit classification of binary cubic forms over `Z/pZ` and `Z/p^2Z`.
//!
//! Level p classifies by the root pattern of `a(u,v)` in `P^1(F_p)`; level
//! p^2 refines the singular types `(1^2 1)` and `(1^3)` into maximality
//! strata. For `p >= 5` the refinement normalizes the root position and reads
//! the coordinate pattern of the D-set representatives; for `p in {2, 3}`
//! (and as a cross-check for 5, 7) full tables are built once by orbit
//! closure from the D-sets under group generators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rayon::prelude::*;
use thiserror::Error;

use crate::forms::{act, delone_faddeev, disc, Form, GroupElement};
use crate::ring::{inv_mod, Ring, Zn};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtlasError {
    #[error("operation not supported for this prime: {0}")]
    UnsupportedPrime(String),
    #[error("enumeration cap exceeded: {0}")]
    ResourceCap(String),
}

/// Orbit type over `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TypeP {
    Zero,
    Irred3,
    Mixed21,
    Split111,
    DoubleSimple,
    Triple,
}

impl TypeP {
    pub fn label(&self) -> &'static str {
        match self {
            TypeP::Zero => "(0)",
            TypeP::Irred3 => "(3)",
            TypeP::Mixed21 => "(21)",
            TypeP::Split111 => "(111)",
            TypeP::DoubleSimple => "(1^2 1)",
            TypeP::Triple => "(1^3)",
        }
    }

    pub const ALL: [TypeP; 6] = [
        TypeP::Irred3,
        TypeP::Mixed21,
        TypeP::Split111,
        TypeP::DoubleSimple,
        TypeP::Triple,
        TypeP::Zero,
    ];
}

/// Orbit type over `Z/p^2Z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TypeP2 {
    /// `a = p a'`: the divisible stratum.
    Divisible,
    Irred3,
    Mixed21,
    Split111,
    DoubleSimpleMax,
    DoubleSimpleStar,
    TripleMax,
    TripleStar,
    TripleStarStar,
}

impl TypeP2 {
    pub fn label(&self) -> &'static str {
        match self {
            TypeP2::Divisible => "pV",
            TypeP2::Irred3 => "(3)",
            TypeP2::Mixed21 => "(21)",
            TypeP2::Split111 => "(111)",
            TypeP2::DoubleSimpleMax => "(1^2 1_max)",
            TypeP2::DoubleSimpleStar => "(1^2 1_*)",
            TypeP2::TripleMax => "(1^3_max)",
            TypeP2::TripleStar => "(1^3_*)",
            TypeP2::TripleStarStar => "(1^3_**)",
        }
    }

    /// The level-p symbol below this one (`Divisible` reduces to `(0)` only
    /// for the zero form; as a stratum marker it has no level-p analogue, so
    /// it maps to `Zero` which is what the reduction of `p a'` can be when
    /// `a' = 0`; callers treat `Divisible` separately).
    pub fn reduce(&self) -> TypeP {
        match self {
            TypeP2::Divisible => TypeP::Zero,
            TypeP2::Irred3 => TypeP::Irred3,
            TypeP2::Mixed21 => TypeP::Mixed21,
            TypeP2::Split111 => TypeP::Split111,
            TypeP2::DoubleSimpleMax | TypeP2::DoubleSimpleStar => TypeP::DoubleSimple,
            TypeP2::TripleMax | TypeP2::TripleStar | TypeP2::TripleStarStar => TypeP::Triple,
        }
    }

    pub const ALL: [TypeP2; 9] = [
        TypeP2::Irred3,
        TypeP2::Mixed21,
        TypeP2::Split111,
        TypeP2::DoubleSimpleMax,
        TypeP2::DoubleSimpleStar,
        TypeP2::TripleMax,
        TypeP2::TripleStar,
        TypeP2::TripleStarStar,
        TypeP2::Divisible,
    ];

    pub fn code(&self) -> u8 {
        match self {
            TypeP2::Divisible => 0,
            TypeP2::Irred3 => 1,
            TypeP2::Mixed21 => 2,
            TypeP2::Split111 => 3,
            TypeP2::DoubleSimpleMax => 4,
            TypeP2::DoubleSimpleStar => 5,
            TypeP2::TripleMax => 6,
            TypeP2::TripleStar => 7,
            TypeP2::TripleStarStar => 8,
        }
    }

    pub fn from_code(c: u8) -> TypeP2 {
        TypeP2::ALL
            .iter()
            .copied()
            .find(|t| t.code() == c)
            .expect("valid type code")
    }
}

/// `|GL2(Z/nZ)| = prod_p p^{4(e-1)} (p^2-1)(p^2-p)`.
pub fn gl2_order(n: u64) -> u64 {
    let mut out = 1u64;
    for (p, e) in crate::ring::factorize(n) {
        out *= p.pow(4 * (e - 1)) * (p * p - 1) * (p * p - p);
    }
    out
}

pub fn form_index(c: &[u64; 4], n: u64) -> u32 {
    (c[0] + n * (c[1] + n * (c[2] + n * c[3]))) as u32
}

pub fn index_form(idx: u32, n: u64) -> [u64; 4] {
    let mut x = idx as u64;
    let mut c = [0u64; 4];
    for v in c.iter_mut() {
        *v = x % n;
        x /= n;
    }
    c
}

fn normalize_mod(a: &[u64; 4], n: u64) -> [u64; 4] {
    [a[0] % n, a[1] % n, a[2] % n, a[3] % n]
}

/// Multiplicity pattern of the rational roots of `a(u,v)` in `P^1(F_p)`.
pub fn type_mod_p(p: u64, a: &[u64; 4]) -> TypeP {
    let f = normalize_mod(a, p);
    if f.iter().all(|&x| x == 0) {
        return TypeP::Zero;
    }
    // f(T) = a1 T^3 + a2 T^2 + a3 T + a4; the root at infinity has
    // multiplicity 3 - deg f.
    let deg = if f[0] != 0 {
        3
    } else if f[1] != 0 {
        2
    } else if f[2] != 0 {
        1
    } else {
        0
    };
    let mut mults: Vec<u32> = Vec::with_capacity(3);
    if deg < 3 {
        mults.push(3 - deg);
    }
    for t in 0..p {
        let m = root_multiplicity(p, &f, t);
        if m > 0 {
            mults.push(m);
        }
    }
    mults.sort_unstable();
    match mults.as_slice() {
        [] => TypeP::Irred3,
        [1] => TypeP::Mixed21,
        [1, 1, 1] => TypeP::Split111,
        [1, 2] => TypeP::DoubleSimple,
        [3] => TypeP::Triple,
        other => unreachable!("impossible root pattern {other:?}"),
    }
}

fn root_multiplicity(p: u64, f: &[u64; 4], t: u64) -> u32 {
    // repeated synthetic division by (T - t)
    let mut coeffs = f.to_vec();
    let mut mult = 0;
    loop {
        let mut acc = 0u64;
        let mut quot = Vec::with_capacity(coeffs.len());
        for &c in &coeffs {
            acc = (acc * t + c) % p;
            quot.push(acc);
        }
        let rem = quot.pop().unwrap_or(0);
        if rem != 0 || coeffs.len() == 1 {
            return mult;
        }
        mult += 1;
        coeffs = quot;
        if coeffs.iter().all(|&c| c == 0) {
            return mult;
        }
    }
}

/// Projective roots `(u : v)` of `a` over `F_p` with multiplicities.
fn projective_roots(p: u64, a: &[u64; 4]) -> Vec<((u64, u64), u32)> {
    let f = normalize_mod(a, p);
    let mut out = Vec::new();
    let deg = if f[0] != 0 {
        3
    } else if f[1] != 0 {
        2
    } else if f[2] != 0 {
        1
    } else {
        0
    };
    if deg < 3 {
        out.push(((1, 0), 3 - deg));
    }
    for t in 0..p {
        let m = root_multiplicity(p, &f, t);
        if m > 0 {
            out.push(((t, 1), m));
        }
    }
    out
}

/// Level-p^2 classification of `a` mod `p^2`. For `p >= 5` this runs the
/// direct normalization; for `p in {2, 3}` it reads the orbit-closure table.
pub fn type_mod_p2(p: u64, a: &[u64; 4]) -> TypeP2 {
    if p <= 3 {
        let table = p2_table(p);
        return TypeP2::from_code(table[form_index(&normalize_mod(a, p * p), p * p) as usize]);
    }
    type_mod_p2_direct(p, a)
}

/// Direct classification, valid for `p >= 5` (checked against the orbit
/// tables for p = 5, 7 in the tests).
pub fn type_mod_p2_direct(p: u64, a: &[u64; 4]) -> TypeP2 {
    let n = p * p;
    let a = normalize_mod(a, n);
    if a.iter().all(|&x| x % p == 0) {
        return TypeP2::Divisible;
    }
    match type_mod_p(p, &a) {
        TypeP::Zero => unreachable!("nonzero form"),
        TypeP::Irred3 => TypeP2::Irred3,
        TypeP::Mixed21 => TypeP2::Mixed21,
        TypeP::Split111 => TypeP2::Split111,
        TypeP::Triple => {
            let roots = projective_roots(p, &a);
            let q = roots[0].0;
            let b = position_roots(p, &a, q, None);
            // normalized position (a1 unit, rest in pR): the (a3, a4) zero
            // pattern of the D-set representatives decides the stratum
            if b[3] != 0 {
                TypeP2::TripleMax
            } else if b[2] != 0 {
                TypeP2::TripleStar
            } else {
                TypeP2::TripleStarStar
            }
        }
        TypeP::DoubleSimple => {
            let roots = projective_roots(p, &a);
            let double = roots.iter().find(|(_, m)| *m == 2).unwrap().0;
            let single = roots.iter().find(|(_, m)| *m == 1).unwrap().0;
            let b = position_roots(p, &a, double, Some(single));
            if b[3] != 0 {
                TypeP2::DoubleSimpleMax
            } else {
                TypeP2::DoubleSimpleStar
            }
        }
    }
}

/// Transform `a` mod `p^2` so the distinguished root sits at `(0:1)`; for the
/// double/simple case the simple root is sent to `(1:0)`.
fn position_roots(p: u64, a: &[u64; 4], q: (u64, u64), q2: Option<(u64, u64)>) -> [u64; 4] {
    let n = p * p;
    let r = Zn::new(n);
    let top = match q2 {
        Some(s) => [s.0, s.1],
        None => {
            if q.0 % p != 0 {
                [0, 1]
            } else {
                [1, 0]
            }
        }
    };
    let g = GroupElement::from_els(&r, [top[0], top[1], q.0, q.1]);
    debug_assert!(r.is_unit(&g.det));
    let fa = Form { c: normalize_mod(a, n) };
    act(&r, &g, &fa).expect("unit determinant").c
}

static P2_TABLES: Lazy<Mutex<HashMap<u64, Arc<Vec<u8>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Classification table over `V(Z/p^2Z)` built once by orbit closure from
/// the D-set representatives. Entry = `TypeP2::code`.
pub fn p2_table(p: u64) -> Arc<Vec<u8>> {
    if let Some(t) = P2_TABLES.lock().unwrap().get(&p) {
        return t.clone();
    }
    let t = Arc::new(build_p2_table(p));
    P2_TABLES.lock().unwrap().insert(p, t.clone());
    t
}

/// Rows of the twisted action of `g` as a plain 4x4 matrix over `Z/n`
/// (including the `det^{-1}` factor).
pub fn action_matrix(n: u64, g: [i64; 4]) -> [[u64; 4]; 4] {
    let r = Zn::new(n);
    let ge = GroupElement::new(&r, g);
    let mut out = [[0u64; 4]; 4];
    for j in 0..4 {
        let mut basis = [0u64, 0, 0, 0];
        basis[j] = 1;
        let img = act(&r, &ge, &Form { c: basis }).expect("unit determinant");
        for i in 0..4 {
            out[i][j] = img.c[i];
        }
    }
    out
}

/// Same for the dual action.
pub fn dual_action_matrix(n: u64, g: [i64; 4]) -> [[u64; 4]; 4] {
    use crate::forms::{act_dual, DualForm};
    let r = Zn::new(n);
    let ge = GroupElement::new(&r, g);
    let mut out = [[0u64; 4]; 4];
    for j in 0..4 {
        let mut basis = [0u64, 0, 0, 0];
        basis[j] = 1;
        let img = act_dual(&r, &ge, &DualForm { c: basis }).expect("unit determinant");
        for i in 0..4 {
            out[i][j] = img.c[i];
        }
    }
    out
}

pub fn apply_matrix(n: u64, m: &[[u64; 4]; 4], c: &[u64; 4]) -> [u64; 4] {
    let mut out = [0u64; 4];
    for i in 0..4 {
        let mut acc = 0u64;
        for j in 0..4 {
            acc = (acc + m[i][j] * c[j]) % n;
        }
        out[i] = acc;
    }
    out
}

/// Generator matrices of `GL2(Z/nZ)`: the two transvections plus a diagonal
/// generator per cyclic factor of the unit group, with inverses.
fn group_generators(n: u64) -> Vec<[i64; 4]> {
    let ug = crate::residue::unit_group(n);
    let mut gens: Vec<[i64; 4]> = vec![[1, 1, 0, 1], [1, -1, 0, 1], [1, 0, 1, 1], [1, 0, -1, 1]];
    for part in &ug.parts {
        for f in &part.factors {
            // CRT-lift the factor generator to a unit mod n
            let mut val = 0u64;
            for q in &ug.parts {
                let residue = if q.p == part.p { f.generator % q.modulus } else { 1 % q.modulus };
                let m = n / q.modulus;
                let mi = inv_mod(m % q.modulus, q.modulus).unwrap();
                val = (val + residue * mi % n * (m % n)) % n;
            }
            gens.push([val as i64, 0, 0, 1]);
            gens.push([inv_mod(val, n).unwrap() as i64, 0, 0, 1]);
        }
    }
    gens
}

fn build_p2_table(p: u64) -> Vec<u8> {
    let n = p * p;
    let size = (n * n * n * n) as usize;
    let mut table = vec![u8::MAX; size];
    let gens: Vec<[[u64; 4]; 4]> = group_generators(n)
        .into_iter()
        .map(|g| action_matrix(n, g))
        .collect();

    // divisible and nonsingular strata classified pointwise
    for idx in 0..size as u32 {
        let c = index_form(idx, n);
        if c.iter().all(|&x| x % p == 0) {
            table[idx as usize] = TypeP2::Divisible.code();
        } else {
            match type_mod_p(p, &c) {
                TypeP::Irred3 => table[idx as usize] = TypeP2::Irred3.code(),
                TypeP::Mixed21 => table[idx as usize] = TypeP2::Mixed21.code(),
                TypeP::Split111 => table[idx as usize] = TypeP2::Split111.code(),
                _ => {}
            }
        }
    }

    // singular strata by closure from the D-sets
    let mut queue: Vec<u32> = Vec::new();
    let seed = |table: &mut Vec<u8>, queue: &mut Vec<u32>, c: [u64; 4], sym: TypeP2| {
        let idx = form_index(&c, n);
        let cur = table[idx as usize];
        assert!(
            cur == u8::MAX || cur == sym.code(),
            "D-sets of p={p} overlap at {c:?}"
        );
        if cur == u8::MAX {
            table[idx as usize] = sym.code();
            queue.push(idx);
        }
    };
    for a2 in 1..n {
        if a2 % p == 0 {
            continue;
        }
        for a3 in (0..n).step_by(p as usize) {
            for a4u in 1..p {
                seed(&mut table, &mut queue, [0, a2, a3, p * a4u], TypeP2::DoubleSimpleMax);
            }
            seed(&mut table, &mut queue, [0, a2, a3, 0], TypeP2::DoubleSimpleStar);
        }
    }
    for a1 in 1..n {
        if a1 % p == 0 {
            continue;
        }
        for a2 in (0..n).step_by(p as usize) {
            for a3 in (0..n).step_by(p as usize) {
                for a4u in 1..p {
                    seed(&mut table, &mut queue, [a1, a2, a3, p * a4u], TypeP2::TripleMax);
                }
            }
            for a3u in 1..p {
                seed(&mut table, &mut queue, [a1, a2, p * a3u, 0], TypeP2::TripleStar);
            }
            seed(&mut table, &mut queue, [a1, a2, 0, 0], TypeP2::TripleStarStar);
        }
    }

    while let Some(idx) = queue.pop() {
        let sym = table[idx as usize];
        let c = index_form(idx, n);
        for m in &gens {
            let img = apply_matrix(n, m, &c);
            let j = form_index(&img, n) as usize;
            let cur = table[j];
            assert!(
                cur == u8::MAX || cur == sym,
                "orbit closure of p={p} produced a type clash"
            );
            if cur == u8::MAX {
                table[j] = sym;
                queue.push(j as u32);
            }
        }
    }
    assert!(
        table.iter().all(|&x| x != u8::MAX),
        "orbit closure left unclassified elements for p={p}"
    );
    table
}

/// Nonmaximality detector `Phi_p`: divisible or starred strata.
pub fn is_nonmaximal(p: u64, a: &[u64; 4]) -> bool {
    matches!(
        type_mod_p2(p, a),
        TypeP2::Divisible | TypeP2::TripleStarStar | TypeP2::TripleStar | TypeP2::DoubleSimpleStar
    )
}

/// `Phi'_p`: nonmaximal or totally ramified, adding the `(1^3_max)` stratum.
pub fn is_nm_or_totally_ramified(p: u64, a: &[u64; 4]) -> bool {
    is_nonmaximal(p, a) || type_mod_p2(p, a) == TypeP2::TripleMax
}

/// Stabilizer order of `a` in `GL2(Z/p^eZ)` by direct scan.
pub fn stabilizer_order(p: u64, e: u32, a: &[u64; 4]) -> Result<u64, AtlasError> {
    let n = p.pow(e);
    if n > 128 {
        return Err(AtlasError::ResourceCap(format!(
            "full-group stabilizer scan needs p^e <= 128, got {n}"
        )));
    }
    let r = Zn::new(n);
    let fa = Form { c: normalize_mod(a, n) };
    let count = (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let al = ab / n;
            let be = ab % n;
            let mut local = 0u64;
            for ga in 0..n {
                for de in 0..n {
                    let g = GroupElement::from_els(&r, [al, be, ga, de]);
                    if !r.is_unit(&g.det) {
                        continue;
                    }
                    if act(&r, &g, &fa).unwrap() == fa {
                        local += 1;
                    }
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// Stabilizer order in `GL2(Z/27Z)` of a `(1^3)`-type form, scanning only
/// lifts of the mod-3 stabilizer of the triple root (the parabolic
/// pre-filter; everything else cannot stabilize).
pub fn stabilizer_order_27_triple(a: &[u64; 4]) -> u64 {
    let p = 3u64;
    let n = 27u64;
    let r = Zn::new(n);
    let fa = Form { c: normalize_mod(a, n) };
    let rp = Zn::new(p);
    let fp = Form { c: normalize_mod(a, p) };
    let mut modp = Vec::new();
    for m0 in 0..p {
        for m1 in 0..p {
            for m2 in 0..p {
                for m3 in 0..p {
                    let g = GroupElement::from_els(&rp, [m0, m1, m2, m3]);
                    if rp.is_unit(&g.det) && act(&rp, &g, &fp).unwrap() == fp {
                        modp.push([m0, m1, m2, m3]);
                    }
                }
            }
        }
    }
    let k = n / p;
    let mut count = 0u64;
    for base in &modp {
        for l0 in 0..k {
            for l1 in 0..k {
                for l2 in 0..k {
                    for l3 in 0..k {
                        let m = [
                            base[0] + p * l0,
                            base[1] + p * l1,
                            base[2] + p * l2,
                            base[3] + p * l3,
                        ];
                        let g = GroupElement::from_els(&r, m);
                        if !r.is_unit(&g.det) {
                            continue;
                        }
                        if act(&r, &g, &fa).unwrap() == fa {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    count
}

/// Exhaustive census of `V(Z/p^eZ)` by orbit type (`e` is 1 or 2).
pub fn census(p: u64, e: u32) -> Result<Vec<(String, u64)>, AtlasError> {
    match e {
        1 => {
            let mut counts: HashMap<TypeP, u64> = HashMap::new();
            let total = p * p * p * p;
            for idx in 0..total as u32 {
                let c = index_form(idx, p);
                *counts.entry(type_mod_p(p, &c)).or_insert(0) += 1;
            }
            Ok(TypeP::ALL
                .iter()
                .map(|t| (t.label().to_string(), *counts.get(t).unwrap_or(&0)))
                .collect())
        }
        2 => {
            if p > 13 {
                return Err(AtlasError::ResourceCap(format!(
                    "level-p^2 census supported for p <= 13, got {p}"
                )));
            }
            let n = p * p;
            let total = (n * n * n * n) as u32;
            let counts = (0..total)
                .into_par_iter()
                .fold(
                    || [0u64; 9],
                    |mut acc, idx| {
                        let c = index_form(idx, n);
                        acc[type_mod_p2(p, &c).code() as usize] += 1;
                        acc
                    },
                )
                .reduce(
                    || [0u64; 9],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b.iter()) {
                            *x += y;
                        }
                        a
                    },
                );
            Ok(TypeP2::ALL
                .iter()
                .map(|t| (t.label().to_string(), counts[t.code() as usize]))
                .collect())
        }
        _ => Err(AtlasError::ResourceCap("census level must be 1 or 2".into())),
    }
}

/// Closed-form level-p counts.
pub fn closed_form_p(p: u64, t: TypeP) -> u64 {
    let u = (p * p - 1) * (p * p - p);
    match t {
        TypeP::Irred3 => u / 3,
        TypeP::Mixed21 => u / 2,
        TypeP::Split111 => u / 6,
        TypeP::DoubleSimple => p * (p * p - 1),
        TypeP::Triple => p * p - 1,
        TypeP::Zero => 1,
    }
}

/// Closed-form level-p^2 counts.
pub fn closed_form_p2(p: u64, t: TypeP2) -> u64 {
    let p4 = p * p * p * p;
    let u = (p * p - 1) * (p * p - p);
    match t {
        TypeP2::Irred3 => p4 * u / 3,
        TypeP2::Mixed21 => p4 * u / 2,
        TypeP2::Split111 => p4 * u / 6,
        TypeP2::DoubleSimpleMax => p * p * p * u,
        TypeP2::DoubleSimpleStar => p4 * (p * p - 1),
        TypeP2::TripleMax => p * p * u,
        TypeP2::TripleStar => p * u,
        TypeP2::TripleStarStar => p * p * (p * p - 1),
        TypeP2::Divisible => p4,
    }
}

/// One `G_{p^2}`-orbit inside a singular stratum.
#[derive(Clone, Debug)]
pub struct OrbitClass {
    pub p: u64,
    pub rep: [u64; 4],
    pub symbol: TypeP2,
    pub cardinality: u64,
    pub stabilizer_order: u64,
}

/// Orbit decomposition of a singular level-p^2 stratum: `(1^2 1_*)` is one
/// orbit, `(1^2 1_max)` two (square class of `a4/p`), `(1^3_**)` one,
/// `(1^3_*)` two, `(1^3_max)` one or three (cube classes) depending on
/// `p mod 3`.
pub fn orbit_split(p: u64, sym: TypeP2) -> Result<Vec<OrbitClass>, AtlasError> {
    let g_order = gl2_order(p * p);
    let total = closed_form_p2(p, sym);
    let nonsquare = (1..p).find(|&u| !is_square_mod(p, u)).unwrap_or(1);
    let mk = |rep: [u64; 4], card: u64| OrbitClass {
        p,
        rep,
        symbol: sym,
        cardinality: card,
        stabilizer_order: g_order / card,
    };
    match sym {
        TypeP2::DoubleSimpleStar => {
            if p == 2 {
                return Err(AtlasError::UnsupportedPrime("(1^2 1) split needs p != 2".into()));
            }
            Ok(vec![mk([0, 1, 0, 0], total)])
        }
        TypeP2::DoubleSimpleMax => {
            if p == 2 {
                return Err(AtlasError::UnsupportedPrime("(1^2 1) split needs p != 2".into()));
            }
            Ok(vec![
                mk([0, 1, 0, p], total / 2),
                mk([0, 1, 0, p * nonsquare], total / 2),
            ])
        }
        TypeP2::TripleStarStar => {
            if p == 3 {
                return Err(AtlasError::UnsupportedPrime("(1^3) split needs p != 3".into()));
            }
            Ok(vec![mk([1, 0, 0, 0], total)])
        }
        TypeP2::TripleStar => {
            if p == 2 || p == 3 {
                return Err(AtlasError::UnsupportedPrime("(1^3_*) split needs p >= 5".into()));
            }
            Ok(vec![
                mk([1, 0, p, 0], total / 2),
                mk([1, 0, p * nonsquare, 0], total / 2),
            ])
        }
        TypeP2::TripleMax => {
            if p == 3 {
                return Err(AtlasError::UnsupportedPrime("(1^3) split needs p != 3".into()));
            }
            if p % 3 == 2 {
                Ok(vec![mk([1, 0, 0, p], total)])
            } else {
                Ok(cube_class_reps(p)
                    .into_iter()
                    .map(|u| mk([1, 0, 0, p * u], total / 3))
                    .collect())
            }
        }
        _ => Err(AtlasError::UnsupportedPrime(format!(
            "{} is not a singular stratum",
            sym.label()
        ))),
    }
}

pub fn is_square_mod(p: u64, u: u64) -> bool {
    (1..p).any(|t| t * t % p == u % p)
}

fn cube_class_reps(p: u64) -> Vec<u64> {
    assert_eq!(p % 3, 1);
    let cubes: std::collections::HashSet<u64> = (1..p).map(|t| t * t % p * t % p).collect();
    let mut reps = vec![1u64];
    for u in 2..p {
        if reps.len() == 3 {
            break;
        }
        let distinct = reps.iter().all(|&r| {
            let rinv = inv_mod(r, p).unwrap();
            !cubes.contains(&(u * rinv % p))
        });
        if distinct {
            reps.push(u);
        }
    }
    reps
}

/// Record of one `G_{Z_3}`-orbit of totally ramified forms mod 27.
#[derive(Clone, Debug)]
pub struct G27Record {
    pub rep: [i64; 4],
    pub aut_order: u64,
    /// `|P(a)|_p^{-1}` as a power of 3
    pub disc_power: u32,
    pub stabilizer_order_27: u64,
    /// stabilizer order predicted by `|Aut| * |Disc(R)|^{-1}`
    pub predicted: u64,
}

/// The nine representatives of `V_{Z_3}(1^3_max)` with their stabilizer
/// orders in `GL2(Z/27Z)`, checked against `|Aut| * |Disc(R)|^{-1}`.
pub fn g27_stabilizer_table() -> Vec<G27Record> {
    let reps: [([i64; 4], u64); 9] = [
        ([1, 0, 3, 3], 1),
        ([1, 0, 6, 3], 1),
        ([1, 3, 0, 3], 1),
        ([1, -3, 0, 3], 3),
        ([1, -3, 0, 12], 3),
        ([1, -3, 0, 21], 3),
        ([1, 0, 0, 3], 1),
        ([1, 0, 0, 12], 1),
        ([1, 0, 0, 21], 1),
    ];
    reps.iter()
        .map(|&(rep, aut)| {
            let form = Form::new(&crate::ring::Zi, rep);
            let d = disc(&crate::ring::Zi, &form);
            let mut ord = 0u32;
            let mut dd = d.unsigned_abs();
            while dd % 3 == 0 {
                dd /= 3;
                ord += 1;
            }
            let a27 = [
                rep[0].rem_euclid(27) as u64,
                rep[1].rem_euclid(27) as u64,
                rep[2].rem_euclid(27) as u64,
                rep[3].rem_euclid(27) as u64,
            ];
            let stab = stabilizer_order_27_triple(&a27);
            G27Record {
                rep,
                aut_order: aut,
                disc_power: ord,
                stabilizer_order_27: stab,
                predicted: aut * 3u64.pow(ord),
            }
        })
        .collect()
}

/// Ring-theoretic p-maximality oracle on an integral form, independent of
/// the orbit classification: searches for an index-p ring enlargement along
/// a nilpotent line of `R/pR` (forms divisible by p are never maximal).
pub fn ring_is_maximal_at_p(x: &Form<crate::ring::Zi>, p: u64) -> bool {
    if x.c.iter().all(|&c| c.rem_euclid(p as i128) == 0) {
        return false;
    }
    let ring = delone_faddeev(x);
    let pi = p as i128;
    let redv =
        |v: &[i128; 3]| [v[0].rem_euclid(pi), v[1].rem_euclid(pi), v[2].rem_euclid(pi)];
    let in_line = |v: &[i128; 3], xi: &[i128; 3]| -> bool {
        (0..pi).any(|c| {
            redv(&[v[0] - c * xi[0], v[1] - c * xi[1], v[2] - c * xi[2]]) == [0, 0, 0]
        })
    };
    // lines of R/pR, by normalized spanning vectors
    let mut lines: Vec<[i128; 3]> = Vec::new();
    for l1 in 0..pi {
        for l2 in 0..pi {
            lines.push([1, l1, l2]);
        }
    }
    for l2 in 0..pi {
        lines.push([0, 1, l2]);
    }
    lines.push([0, 0, 1]);
    for xi in &lines {
        let xw = ring.mul(xi, &[0, 1, 0]);
        let xt = ring.mul(xi, &[0, 0, 1]);
        if !in_line(&redv(&xw), xi) || !in_line(&redv(&xt), xi) {
            continue;
        }
        let sq = ring.mul(xi, xi);
        if sq.iter().any(|c| c.rem_euclid(pi) != 0) {
            continue;
        }
        let sq_over_p = [sq[0].div_euclid(pi), sq[1].div_euclid(pi), sq[2].div_euclid(pi)];
        if in_line(&redv(&sq_over_p), xi) {
            return false;
        }
    }
    true
}

/// Orbit decomposition of all of `V(Z/NZ)` under `G_N`, by closure under
/// group generators. Returns `(representative, orbit size)` pairs.
pub fn orbit_decomposition_v(n: u64) -> Vec<([u64; 4], u64)> {
    let gens: Vec<[[u64; 4]; 4]> = group_generators(n)
        .into_iter()
        .map(|g| action_matrix(n, g))
        .collect();
    orbits_under(n, &gens)
}

/// Orbit decomposition of the dual space `V*(Z/NZ)`.
pub fn orbit_decomposition_v_dual(n: u64) -> Vec<([u64; 4], u64)> {
    let gens: Vec<[[u64; 4]; 4]> = group_generators(n)
        .into_iter()
        .map(|g| dual_action_matrix(n, g))
        .collect();
    orbits_under(n, &gens)
}

fn orbits_under(n: u64, gens: &[[[u64; 4]; 4]]) -> Vec<([u64; 4], u64)> {
    let total = (n * n * n * n) as usize;
    let mut seen = vec![false; total];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..total as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut size = 0u64;
        seen[start as usize] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            size += 1;
            let c = index_form(idx, n);
            for m in gens {
                let img = apply_matrix(n, m, &c);
                let j = form_index(&img, n) as usize;
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j as u32);
                }
            }
        }
        out.push((index_form(start, n), size));
    }
    out
}
