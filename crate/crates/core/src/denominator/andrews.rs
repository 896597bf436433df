use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{e_j_jet, DenomError};
use crate::exact_algebra::{AlgebraError, BigRat, CycloFrac, Jet, LaurentJet};
use crate::linear_forms::FormParams;

/// The few ring operations the transformation needs.
pub trait AndrewsRing: Clone {
    /// The unit, at the same precision as `self` where that matters.
    fn one_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn inverse(&self) -> Result<Self, DenomError>;
}

impl AndrewsRing for BigRat {
    fn one_like(&self) -> Self {
        BigRat::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn inverse(&self) -> Result<Self, DenomError> {
        if self.is_zero() {
            Err(DenomError::Degenerate)
        } else {
            Ok(self.recip())
        }
    }
}

impl AndrewsRing for LaurentJet<CycloFrac> {
    fn one_like(&self) -> Self {
        LaurentJet::constant(CycloFrac::one(), self.precision())
    }
    fn plus(&self, o: &Self) -> Self {
        LaurentJet::add(self, o)
    }
    fn minus(&self, o: &Self) -> Self {
        LaurentJet::sub(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        LaurentJet::mul(self, o)
    }
    fn inverse(&self) -> Result<Self, DenomError> {
        Ok(self.invert()?)
    }
}

/// Parameters `m, N, q, a, b_1..b_{m+1}, c_1..c_{m+1}`.
#[derive(Clone, Debug)]
pub struct AndrewsInstance<R> {
    pub m: usize,
    pub n: usize,
    pub base: R,
    pub a: R,
    pub b: Vec<R>,
    pub c: Vec<R>,
}

fn pow_n<R: AndrewsRing>(x: &R, e: usize) -> R {
    (0..e).fold(x.one_like(), |acc, _| acc.times(x))
}

/// `[(x; q)_0, ..., (x; q)_len]`.
fn poch_table<R: AndrewsRing>(x: &R, q: &R, len: usize) -> Vec<R> {
    let one = x.one_like();
    let mut out = vec![one.clone()];
    let mut xq = x.clone();
    for _ in 0..len {
        let next = out.last().unwrap().times(&one.minus(&xq));
        out.push(next);
        xq = xq.times(q);
    }
    out
}

impl<R: AndrewsRing> AndrewsInstance<R> {
    fn check_shape(&self) -> Result<(), DenomError> {
        if self.b.len() != self.m + 1 || self.c.len() != self.m + 1 {
            return Err(DenomError::InvalidParams(format!(
                "need {} values of b and c",
                self.m + 1
            )));
        }
        Ok(())
    }

    fn q_pow(&self, e: i64) -> Result<R, DenomError> {
        let p = pow_n(&self.base, e.unsigned_abs() as usize);
        if e < 0 {
            p.inverse()
        } else {
            Ok(p)
        }
    }

    /// `aq / x`.
    fn aq_over(&self, x: &R) -> Result<R, DenomError> {
        Ok(self.a.times(&self.base).times(&x.inverse()?))
    }

    /// The very-well-poised single sum.
    pub fn lhs(&self) -> Result<R, DenomError> {
        self.check_shape()?;
        let (q, a, n) = (&self.base, &self.a, self.n);
        let one = a.one_like();
        let q_minus_n = self.q_pow(-(n as i64))?;
        let mut num_tabs = vec![poch_table(&q_minus_n, q, n)];
        let mut den_tabs = vec![poch_table(q, q, n)];
        let mut bc = one.clone();
        for x in self.b.iter().chain(&self.c) {
            num_tabs.push(poch_table(x, q, n));
            den_tabs.push(poch_table(&self.aq_over(x)?, q, n));
            bc = bc.times(x);
        }
        den_tabs.push(poch_table(&a.times(&self.q_pow(n as i64 + 1)?), q, n));
        let aq = poch_table(&a.times(q), q, n);
        let z = pow_n(a, self.m + 1)
            .times(&self.q_pow((self.m + 1 + n) as i64)?)
            .times(&bc.inverse()?);
        let mut total = one.clone();
        let mut zk = one.clone();
        let mut q2k = one.clone();
        let q2 = q.times(q);
        for k in 1..=n {
            zk = zk.times(&z);
            q2k = q2k.times(&q2);
            let mut num = one.minus(&a.times(&q2k)).times(&aq[k - 1]).times(&zk);
            let mut den = one.clone();
            for t in &num_tabs {
                num = num.times(&t[k]);
            }
            for t in &den_tabs {
                den = den.times(&t[k]);
            }
            total = total.plus(&num.times(&den.inverse()?));
        }
        Ok(total)
    }

    /// The prefactor times the `m`-fold sum over `0 <= l_1 <= ... <= l_m <= N`.
    pub fn rhs(&self) -> Result<R, DenomError> {
        self.check_shape()?;
        let (q, a, n, m) = (&self.base, &self.a, self.n, self.m);
        let one = a.one_like();
        let (bl, cl) = (&self.b[m], &self.c[m]);
        let bc_last = bl.times(cl);
        let pre_num = poch_table(&a.times(q), q, n)[n].times(&poch_table(&self.aq_over(&bc_last)?, q, n)[n]);
        let pre_den = poch_table(&self.aq_over(bl)?, q, n)[n].times(&poch_table(&self.aq_over(cl)?, q, n)[n]);
        let prefactor = pre_num.times(&pre_den.inverse()?);

        let q_minus_n = self.q_pow(-(n as i64))?;
        let top_num = poch_table(&q_minus_n, q, n);
        let top_den = poch_table(&bc_last.times(&q_minus_n).times(&a.inverse()?), q, n);
        let qq = poch_table(q, q, n);
        // per level i (0-based): numerator (b_{i+1}, c_{i+1}), denominator (aq/b_i, aq/c_i)
        let mut lvl_num = Vec::with_capacity(m);
        let mut lvl_den = Vec::with_capacity(m);
        let mut lvl_gap = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m {
            lvl_num.push(
                poch_table(&self.b[i + 1], q, n)
                    .iter()
                    .zip(poch_table(&self.c[i + 1], q, n))
                    .map(|(x, y)| x.times(&y))
                    .collect::<Vec<_>>(),
            );
            lvl_den.push(
                poch_table(&self.aq_over(&self.b[i])?, q, n)
                    .iter()
                    .zip(poch_table(&self.aq_over(&self.c[i])?, q, n))
                    .map(|(x, y)| x.times(&y))
                    .collect::<Vec<_>>(),
            );
            lvl_gap.push(poch_table(&self.aq_over(&self.b[i].times(&self.c[i]))?, q, n));
            // the weight of l_i: q, times a / (b_{i+1} c_{i+1}) below the top level
            let w = if i + 1 < m {
                q.times(a).times(&self.b[i + 1].times(&self.c[i + 1]).inverse()?)
            } else {
                q.clone()
            };
            weights.push(poch_table_powers(&w, n));
        }

        let mut total = one.clone().minus(&one);
        let mut ls = vec![0usize; m];
        loop {
            let mut num = one.clone();
            let mut den = one.clone();
            let mut prev = 0;
            for i in 0..m {
                let l = ls[i];
                num = num
                    .times(&weights[i][l])
                    .times(&lvl_num[i][l])
                    .times(&lvl_gap[i][l - prev]);
                den = den.times(&lvl_den[i][l]).times(&qq[l - prev]);
                prev = l;
            }
            num = num.times(&top_num[prev]);
            den = den.times(&top_den[prev]);
            total = total.plus(&num.times(&den.inverse()?));
            if !next_tuple(&mut ls, n) {
                break;
            }
        }
        Ok(prefactor.times(&total))
    }
}

/// `[1, w, w^2, ..., w^len]`.
fn poch_table_powers<R: AndrewsRing>(w: &R, len: usize) -> Vec<R> {
    let mut out = vec![w.one_like()];
    for _ in 0..len {
        let next = out.last().unwrap().times(w);
        out.push(next);
    }
    out
}

/// Advances a non-decreasing tuple with entries in `0..=top`; false when exhausted.
fn next_tuple(ls: &mut [usize], top: usize) -> bool {
    let m = ls.len();
    for i in (0..m).rev() {
        if ls[i] < top {
            ls[i] += 1;
            for j in i + 1..m {
                ls[j] = ls[i];
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AndrewsOutcome {
    pub lhs: BigRat,
    pub rhs: BigRat,
    pub equal: bool,
}

pub fn andrews_transform(inst: &AndrewsInstance<BigRat>) -> Result<AndrewsOutcome, DenomError> {
    let lhs = inst.lhs()?;
    let rhs = inst.rhs()?;
    Ok(AndrewsOutcome {
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Terminating very-well-poised `8phi7` against the balanced `4phi3` side, written out
/// directly for `m = 1`.
pub fn watson_sides(
    q: &BigRat,
    a: &BigRat,
    [b, c, d, e]: [&BigRat; 4],
    n: usize,
) -> Result<(BigRat, BigRat), DenomError> {
    let one = BigRat::one();
    if *a == one || q.is_zero() {
        return Err(DenomError::Degenerate);
    }
    let poch = |x: &BigRat, k: usize| -> BigRat {
        let mut acc = one.clone();
        let mut y = x.clone();
        for _ in 0..k {
            acc *= &one - &y;
            y *= q;
        }
        acc
    };
    let qn = num_traits::pow(q.clone(), n);
    let qmn = qn.recip();
    let aq = a * q;
    let z = a * a * &qn * q * q / (b * c * d * e);
    let mut lhs = BigRat::zero();
    for k in 0..=n {
        let vwp = (&one - a * num_traits::pow(q.clone(), 2 * k)) / (&one - a);
        let num = poch(a, k) * poch(b, k) * poch(c, k) * poch(d, k) * poch(e, k) * poch(&qmn, k);
        let den = poch(q, k)
            * poch(&(&aq / b), k)
            * poch(&(&aq / c), k)
            * poch(&(&aq / d), k)
            * poch(&(&aq / e), k)
            * poch(&(&aq * &qn), k);
        if den.is_zero() {
            return Err(DenomError::Degenerate);
        }
        lhs += vwp * num / den * num_traits::pow(z.clone(), k);
    }
    let mut sum = BigRat::zero();
    for k in 0..=n {
        let num = poch(&(&aq / (b * c)), k) * poch(d, k) * poch(e, k) * poch(&qmn, k) * num_traits::pow(q.clone(), k);
        let den = poch(q, k) * poch(&(&aq / b), k) * poch(&(&aq / c), k) * poch(&(d * e * &qmn / a), k);
        if den.is_zero() {
            return Err(DenomError::Degenerate);
        }
        sum += num / den;
    }
    let pre_den = poch(&(&aq / d), n) * poch(&(&aq / e), n);
    if pre_den.is_zero() {
        return Err(DenomError::Degenerate);
    }
    let rhs = poch(&aq, n) * poch(&(&aq / (d * e)), n) / pre_den * sum;
    Ok((lhs, rhs))
}

/// One seeded random draw in a sweep.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AndrewsRecord {
    pub seed: u64,
    pub index: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub redraws: usize,
    pub equal: bool,
}

fn random_rat(rng: &mut ChaCha8Rng) -> BigRat {
    loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=9);
        if num != 0 {
            return BigRat::new(num.into(), den.into());
        }
    }
}

/// Draws instance `index` of a sweep: `m = index mod 4`, `N = (index / 4) mod 5`,
/// rational parameters redrawn until nothing degenerates.
pub fn random_instance(seed: u64, index: usize) -> (AndrewsInstance<BigRat>, usize) {
    let m = index % 4;
    let n = (index / 4) % 5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut redraws = 0;
    loop {
        let mut base = random_rat(&mut rng);
        while base.numer() == base.denom() || -base.numer() == *base.denom() {
            base = random_rat(&mut rng);
        }
        let inst = AndrewsInstance {
            m,
            n,
            a: random_rat(&mut rng),
            b: (0..=m).map(|_| random_rat(&mut rng)).collect(),
            c: (0..=m).map(|_| random_rat(&mut rng)).collect(),
            base,
        };
        if inst.lhs().is_ok() && inst.rhs().is_ok() {
            return (inst, redraws);
        }
        redraws += 1;
    }
}

pub fn andrews_sweep(seed: u64, count: usize) -> Vec<AndrewsRecord> {
    use rayon::prelude::*;
    (0..count)
        .into_par_iter()
        .map(|index| {
            let (inst, redraws) = random_instance(seed, index);
            let out = andrews_transform(&inst).expect("checked draw");
            AndrewsRecord {
                seed,
                index,
                m: inst.m,
                n: inst.n,
                redraws,
                equal: out.equal,
            }
        })
        .collect()
}

/// `p^c u^e` as a Laurent jet in `eps = u - 1`, with `p = 1/q`.
fn p_mono(c: i64, e: i64, prec: usize) -> LaurentJet<CycloFrac> {
    let j = Jet::<CycloFrac>::one_plus_eps_pow(e, prec - 1).scalar_mul(&CycloFrac::q_pow(-c));
    LaurentJet::from_jet(&j)
}

/// The instance obtained from `sum_{j=k}^{n} (1 - q^{n-2j} u^2) e_j(u)` after
/// factoring out its first term, in base `p = 1/q`.
pub fn applied_instance(p: &FormParams, k: i64, prec: usize) -> AndrewsInstance<LaurentJet<CycloFrac>> {
    let FormParams { a, r, n } = *p;
    let h = (a / 2) as usize;
    let m = h + 1;
    let x = p_mono(k - n, 1, prec);
    let mut b = vec![p_mono(r * n + k + 1, 1, prec)];
    let mut c = vec![x.clone()];
    for _ in 2..=h + 1 {
        b.push(x.clone());
    }
    for _ in 2..=h {
        c.push(x.clone());
    }
    c.push(p_mono(k + 1, 2, prec));
    b.push(p_mono(1, 0, prec));
    c.push(x);
    AndrewsInstance {
        m,
        n: (n - k) as usize,
        base: p_mono(1, 0, prec),
        a: p_mono(2 * k - n, 2, prec),
        b,
        c,
    }
}

/// `v_k(u) = e_k(u) (1 - q^{n-2k} u^2)`.
fn v_jet(p: &FormParams, j: i64, order: usize) -> Result<Jet<CycloFrac>, DenomError> {
    let u2 = Jet::<CycloFrac>::one_plus_eps_pow(2, order).scalar_mul(&CycloFrac::q_pow(p.n - 2 * j));
    Ok(e_j_jet(p, j, order)?.mul(&Jet::one(order).sub(&u2)))
}

fn applied(p: &FormParams, k: i64, order: usize, use_rhs: bool) -> Result<Jet<CycloFrac>, DenomError> {
    if k < 1 || k > p.n {
        return Err(DenomError::InvalidParams(format!("k = {k} outside 1..={}", p.n)));
    }
    if p.a < 2 || p.a % 2 != 0 {
        return Err(DenomError::InvalidParams(format!(
            "A = {} must be even and at least 2",
            p.a
        )));
    }
    let mut slack = 2 * p.n as usize + 4;
    loop {
        let prec = order + 1 + slack;
        let inst = applied_instance(p, k, prec);
        let s = if use_rhs { inst.rhs()? } else { inst.lhs()? };
        let v = LaurentJet::from_jet(&v_jet(p, k, prec - 1)?);
        match v.mul(&s).to_jet(order) {
            Ok(j) => return Ok(j),
            Err(AlgebraError::Precision) if slack < 64 => slack *= 2,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Jet of `v_k(u)` times the multiple-sum side of the transformation.
pub fn andrews_applied_sum(p: &FormParams, k: i64, order: usize) -> Result<Jet<CycloFrac>, DenomError> {
    applied(p, k, order, true)
}

/// Jet of `v_k(u)` times the single-sum side, before transforming.
pub fn andrews_applied_single_sum(p: &FormParams, k: i64, order: usize) -> Result<Jet<CycloFrac>, DenomError> {
    applied(p, k, order, false)
}

/// Jet of `sum_{j=k}^{n} (1 - q^{n-2j} u^2) e_j(u)` computed term by term.
pub fn direct_applied_sum(p: &FormParams, k: i64, order: usize) -> Result<Jet<CycloFrac>, DenomError> {
    let mut acc = Jet::zero(order);
    for j in k..=p.n {
        acc = acc.add(&v_jet(p, j, order)?);
    }
    Ok(acc)
}
