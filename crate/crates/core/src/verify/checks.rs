use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{CheckInfo, Eval, Instance, Quantity, Relation};
use crate::error::{Error, Result};
use crate::fourier::balanced_energy;
use crate::group::Group;
use crate::scalar::ratio_to_f64;
use crate::set::GroupSet;
use crate::setops::{
    cartesian_product, difference_set, gen_diff_set, gen_diff_size, gen_diff_size_profiles,
    gen_product_diff_size, gen_signed_set, higher_diff_size, is_solution_free, iterated_sumset,
    shift_intersection, sumset, tuple_coords, tuple_sumset, TupleSpec, DEFAULT_ENUMERATION_CAP,
};
use crate::solver::cover::{cov_exact_with, CoverOptions};
use crate::solver::mult::cov_mult;
use crate::solver::universality::{u_n, un_by_profiles, un_exact_with, UnValue};

const fn info(id: &'static str, name: &'static str, anchor: &'static str) -> CheckInfo {
    CheckInfo {
        id,
        name,
        anchor,
        premise_gated: false,
        report_only: false,
    }
}

const fn gated(id: &'static str, name: &'static str, anchor: &'static str) -> CheckInfo {
    CheckInfo {
        id,
        name,
        anchor,
        premise_gated: true,
        report_only: false,
    }
}

pub(super) static REGISTRY: &[CheckInfo] = &[
    info("V01", "Plunnecke-Ruzsa", "|nA - mA| <= (|A+A|/|A|)^(n+m) |A|"),
    info("V02", "cov/un identity", "cov(A) = un(A^c) + 1"),
    info("V03", "basic cov bounds", "N/|A| <= cov(A) <= (N/|A|)(log|A| + 1)"),
    info("V04", "Ruzsa covering", "cov(A - A) <= 1/alpha"),
    info("V05", "sumset covering", "cov(A + B) <= (1/alpha) log(1/beta) + 1"),
    info("V06", "restricted covering", "cov(A + B; E) <= (1/alpha) log(|B - E|/|B|) + 1"),
    info("V07", "Moshchevitin", "un(A + B) >= un(A) + un(B) - 1"),
    info("V08", "un multiplicativity", "un(A + B) >= un(A) un(B)"),
    info("V09", "shift-intersection inclusion", "A_X ⊆ D_(B+X), D = A - B"),
    info("V10", "U multiplicativity", "U_nm(A + B) >= U_m(A) U_n(B)^m"),
    info("V11", "expansion with S", "|A+B+S| >= (|S|/N)^(1/mn) Ubar_m(A)^(1/n) Ubar_n(B) N"),
    info("V12", "iterated sumset U bound", "Ubar_(m^l)(lA) >= Ubar_m(A)^((m^l - 1)/(m^l - m^(l-1)))"),
    info("V13", "universal block expansion", "|U^(nk) - Delta_(k..k;n)(S)| >= sigma N^(nk)"),
    gated("V14", "solution-free un bound", "un(A) <= (2 log(1/delta))^(1/([n/2]-1)); un(A) <= log(1/delta)/delta for n = 3"),
    gated("V15", "E_k uniformity implies universality", "||f_A||_(E_l)^(2l) <= eps^(2l) delta^(2l) N^(l+1) for l <= k  =>  Ubar_k(A) > 1/(1+eps^2)"),
    gated("V16", "solution-free E_l lower bound", "exists l <= (3 log(1/delta))^(1/([n/2]-1)) + 1: ||f_A||_(E_l)^(2l) >= eps^(2l) delta^(2l) N^(l+1)"),
    info("V17", "cov of intersections", "cov(A_X) >= (cov(A) - 1)(cov(X^c) - 1) + 1"),
    info("V18", "sandwich lemma", "|B| cov(A+B) >= cov(A) >= (cov(A+B) - 1)(cov(B^c) - 1) + 1"),
    info("V19", "consequences for sums", "cov(A) <= (N/|A_B|) log(N/|B|) + 1; cov(A^c) <= N/(N - |A+B|) log(N/|B|) + 1"),
    info("V20", "Katz-Koester covering", "cov(D_X) <= (1/alpha) log(N/|A_X|) + 1, D = A - A"),
    info("V21", "product-group covering", "cov(A x B + Delta_2(C + D)) <= 1/(alpha gamma) log(1/(beta delta)) + 1"),
    info("V22", "union lower bound", "cov(A ∪ B) >= (1/2) min{1/(beta K^3), max{beta cov(A)/log(2K^4), cov(A)/(2K^4 log(1/beta))}}"),
    info("V23", "generalized triangle inequalities", "|W x X||Y - Delta(Z)| <= |W x Y x Z - Delta(X)|; |W x Z - Delta(X)| = |W x X - Delta(Z)|"),
    info("V24", "block triangle inequalities", "|C||A ± Delta(B)| <= |A ± Delta(C)||B ± C|"),
    info("V25", "Cauchy-Schwarz energy link", "|Q|^(2m)|B|^2 <= |Q^m - Delta(B)| sum_(b,b') prod (Q o Q)^(m_i)(b_i - b'_i)"),
    info("V26", "Cartesian universality", "un(U_1 x ... x U_m) = min_j un(U_j)"),
    info("V27", "diagonal expansion", "|U^m - Delta_m(S)| > N^m (1 - m/(k-m+1) log(1/sigma))"),
    gated("V28", "multiplicative covering of A - A", "cov^x(A - A) <= 1/alpha + 1 when lpf(q) > 2/alpha + 3"),
    CheckInfo {
        id: "V29",
        name: "quadratic residue covering growth",
        anchor: "cov+(R) ~ (1/2 + o(1)) log_2 p",
        premise_gated: false,
        report_only: true,
    },
    info("V30", "multiplicative universality of (A - A)^c", "cov^x((A - A)^c) >= log(p - 1)/log(1/alpha)"),
];

pub(super) fn evaluate(id: &str, inst: &Instance) -> Result<Eval> {
    let g = inst.group()?;
    match id {
        "V01" => v01(&g, inst),
        "V02" => v02(&g, inst),
        "V03" => v03(&g, inst),
        "V04" => v04(&g, inst),
        "V05" => v05(&g, inst),
        "V06" => v06(&g, inst),
        "V07" | "V08" => v07_08(id, &g, inst),
        "V09" => v09(&g, inst),
        "V10" => v10(&g, inst),
        "V11" => v11(&g, inst),
        "V12" => v12(&g, inst),
        "V13" => v13(&g, inst),
        "V14" => v14(&g, inst),
        "V15" => v15(&g, inst),
        "V16" => v16(&g, inst),
        "V17" => v17(&g, inst),
        "V18" => v18(&g, inst),
        "V19" => v19(&g, inst),
        "V20" => v20(&g, inst),
        "V21" => v21(&g, inst),
        "V22" => v22(&g, inst),
        "V23" => v23(&g, inst),
        "V24" => v24(&g, inst),
        "V25" => v25(&g, inst),
        "V26" => v26(&g, inst),
        "V27" => v27(&g, inst),
        "V28" => v28(&g, inst),
        "V29" => v29(&g, inst),
        "V30" => v30(&g, inst),
        _ => Err(Error::UnknownCheck(id.to_string())),
    }
}

fn nonempty(g: &Arc<Group>, inst: &Instance, name: &str) -> Result<GroupSet> {
    let s = inst.set(g, name)?;
    if s.is_empty() {
        return Err(Error::MalformedInstance(format!("{name} must be nonempty")));
    }
    Ok(s)
}

/// Certified `cov(A; E)`; an exhausted budget is an error, never a value.
pub(crate) fn cov_of(a: &GroupSet, e: &GroupSet) -> Result<usize> {
    let w = cov_exact_with(a, e, CoverOptions::default())?;
    w.exact().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "cover search exhausted its budget with cov in [{}, {:?}]",
            w.lower_bound, w.value
        ))
    })
}

fn cov_full(a: &GroupSet) -> Result<usize> {
    cov_of(a, &GroupSet::full(a.group()))
}

/// `un(A)` with `None` for infinity.
fn un_of(a: &GroupSet) -> Result<Option<usize>> {
    un_exact_with(a, CoverOptions::default(), &[])?.un.resolved()
}

fn un_quantity(u: Option<usize>) -> Quantity {
    match u {
        Some(v) => Quantity::int(v),
        None => Quantity::Infinite,
    }
}

fn int(v: usize) -> Quantity {
    Quantity::int(v as u64)
}

fn big(v: u128) -> BigInt {
    BigInt::from(v)
}

fn rpow(r: &BigRational, e: usize) -> BigRational {
    Pow::pow(r, e as u32)
}

fn ubar(a: &GroupSet, n: usize) -> Result<f64> {
    Ok(ratio_to_f64(&u_n(a, n)?).powf(1.0 / n as f64))
}

fn cap() -> u128 {
    DEFAULT_ENUMERATION_CAP
}

fn v01(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let (n, m) = (inst.usize("n")?, inst.usize("m")?);
    let lhs = iterated_sumset(&a, n, m)?.len();
    let k = sumset(&a, &a)?.len();
    let rhs = BigRational::new(
        BigInt::from(k).pow((n + m) as u32),
        BigInt::from(a.len()).pow((n + m - 1) as u32),
    );
    let mut ev = Eval::default();
    ev.push("|nA - mA| vs (|A+A|/|A|)^(n+m)|A|", int(lhs), Relation::Le, Quantity::Exact(rhs));
    Ok(ev)
}

fn v02(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    if a.is_full() {
        return Ok(Eval::skip("A = G leaves an empty complement"));
    }
    let lhs = cov_full(&a)?;
    let rhs = match un_by_profiles(&a.complement())? {
        UnValue::Finite { value } => int(value + 1),
        UnValue::Infinite => Quantity::Infinite,
        UnValue::Indeterminate { .. } => unreachable!("profile search is exact"),
    };
    let mut ev = Eval::default();
    ev.push("cov(A) vs un(A^c) + 1", int(lhs), Relation::Eq, rhs);
    Ok(ev)
}

fn v03(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let n = g.order();
    let c = cov_full(&a)?;
    let mut ev = Eval::default();
    ev.push("cov(A) vs N/|A|", int(c), Relation::Ge, Quantity::ratio(n as u64, a.len() as u64));
    let upper = n as f64 / a.len() as f64 * ((a.len() as f64).ln() + 1.0);
    ev.push("cov(A) vs (N/|A|)(log|A| + 1)", int(c), Relation::Le, Quantity::Float(upper));
    Ok(ev)
}

fn v04(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let c = cov_full(&difference_set(&a, &a)?)?;
    let mut ev = Eval::default();
    ev.push("cov(A - A) vs 1/alpha", int(c), Relation::Le, Quantity::ratio(g.order() as u64, a.len() as u64));
    Ok(ev)
}

fn v05(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let n = g.order() as f64;
    let c = cov_full(&sumset(&a, &b)?)?;
    let rhs = n / a.len() as f64 * (n / b.len() as f64).ln() + 1.0;
    let mut ev = Eval::default();
    ev.push("cov(A + B) vs (1/alpha) log(1/beta) + 1", int(c), Relation::Le, Quantity::Float(rhs));
    Ok(ev)
}

fn v06(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let e = nonempty(g, inst, "E")?;
    let c = cov_of(&sumset(&a, &b)?, &e)?;
    let be = difference_set(&b, &e)?.len() as f64;
    let rhs = g.order() as f64 / a.len() as f64 * (be / b.len() as f64).ln() + 1.0;
    let mut ev = Eval::default();
    ev.push("cov(A + B; E) vs (1/alpha) log(|B - E|/|B|) + 1", int(c), Relation::Le, Quantity::Float(rhs));
    Ok(ev)
}

fn v07_08(id: &str, g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let (ua, ub) = (un_of(&a)?, un_of(&b)?);
    let uab = un_of(&sumset(&a, &b)?)?;
    let rhs = match (ua, ub) {
        (Some(x), Some(y)) if id == "V07" => int(x + y - 1),
        (Some(x), Some(y)) => int(x * y),
        _ => Quantity::Infinite,
    };
    let mut ev = Eval::default();
    ev.note("un_A", serde_json::to_value(ua).unwrap_or_default());
    ev.note("un_B", serde_json::to_value(ub).unwrap_or_default());
    let label = if id == "V07" { "un(A+B) vs un(A) + un(B) - 1" } else { "un(A+B) vs un(A) un(B)" };
    ev.push(label, un_quantity(uab), Relation::Ge, rhs);
    Ok(ev)
}

fn v09(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = inst.set(g, "A")?;
    let b = nonempty(g, inst, "B")?;
    let x = nonempty(g, inst, "X")?;
    let ax = shift_intersection(&a, &x)?;
    let d = difference_set(&a, &b)?;
    let dbx = shift_intersection(&d, &sumset(&b, &x)?)?;
    let mut ev = Eval::default();
    ev.push("|A_X minus D_(B+X)|", int(ax.minus(&dbx)?.len()), Relation::Eq, int(0));
    Ok(ev)
}

fn v10(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let (m, n) = (inst.usize("m")?, inst.usize("n")?);
    let lhs = u_n(&sumset(&a, &b)?, n * m)?;
    let rhs = u_n(&a, m)? * rpow(&u_n(&b, n)?, m);
    let mut ev = Eval::default();
    ev.push("U_nm(A+B) vs U_m(A) U_n(B)^m", Quantity::Exact(lhs), Relation::Ge, Quantity::Exact(rhs));
    Ok(ev)
}

fn v11(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let s = nonempty(g, inst, "S")?;
    let (m, n) = (inst.usize("m")?, inst.usize("n")?);
    let nn = g.order() as f64;
    let lhs = sumset(&sumset(&a, &b)?, &s)?.len();
    let rhs = (s.len() as f64 / nn).powf(1.0 / (m * n) as f64) * ubar(&a, m)?.powf(1.0 / n as f64) * ubar(&b, n)? * nn;
    let mut ev = Eval::default();
    ev.push("|A+B+S| vs (|S|/N)^(1/mn) Ubar_m(A)^(1/n) Ubar_n(B) N", int(lhs), Relation::Ge, Quantity::Float(rhs));
    Ok(ev)
}

fn v12(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let (m, l) = (inst.usize("m")?, inst.usize("l")?);
    if m < 2 || l < 1 {
        return Err(Error::MalformedInstance("need m >= 2 and l >= 1".into()));
    }
    let big_m = m.pow(l as u32);
    let la = iterated_sumset(&a, l, 0)?;
    // Ubar_M(lA) >= Ubar_m(A)^((M-1)/(M-M/m))  <=>  U_M(lA)^(m-1) >= U_m(A)^(M-1)
    let lhs = rpow(&u_n(&la, big_m)?, m - 1);
    let rhs = rpow(&u_n(&a, m)?, big_m - 1);
    let mut ev = Eval::default();
    ev.note("ubar_lhs", ubar(&la, big_m)?);
    ev.push("U_M(lA)^(m-1) vs U_m(A)^(M-1), M = m^l", Quantity::Exact(lhs), Relation::Ge, Quantity::Exact(rhs));
    Ok(ev)
}

fn v13(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let u = nonempty(g, inst, "U")?;
    let k = inst.usize("k")?;
    match un_of(&u)? {
        Some(v) if v < k => return Ok(Eval::skip(format!("U is only {v}-universal"))),
        _ => {}
    }
    let (n, s) = inst.tuples(g, "S")?;
    let nn = g.order() as u128;
    let mut ev = Eval::default();
    let lhs = gen_diff_size_profiles(&u, &TupleSpec::uniform(k, n)?, &s)?;
    let rhs = big(s.len() as u128) * big(nn.pow((n * k - n) as u32));
    ev.push("|U^(nk) - Delta_(k..k;n)(S)| vs sigma N^(nk)", Quantity::int(big(lhs)), Relation::Ge, Quantity::int(rhs));
    let a = nonempty(g, inst, "A")?;
    let s1 = nonempty(g, inst, "S1")?;
    let mm = inst.usize("mm")?;
    let lhs2 = sumset(&sumset(&u, &a)?, &s1)?.len();
    let rhs2 = nn as f64 * (s1.len() as f64 / nn as f64).powf(1.0 / (k * mm) as f64) * ubar(&a, mm)?.powf(1.0 / k as f64);
    ev.push("|U+A+S| vs N (|S|/N)^(1/km) Ubar_m(A)^(1/k)", int(lhs2), Relation::Ge, Quantity::Float(rhs2));
    Ok(ev)
}

/// Shared premise of the solution-free checks; returns `(A, n, delta)` or a skip reason.
fn solution_free_premise(g: &Arc<Group>, inst: &Instance) -> Result<std::result::Result<(GroupSet, usize, f64), String>> {
    let a = inst.set(g, "A")?;
    let coeffs = inst.ints("coeffs")?;
    let beta = inst.usize("beta")?;
    if a.is_empty() {
        return Ok(Err("A is empty".into()));
    }
    if coeffs.len() < 3 {
        return Err(Error::MalformedInstance("need at least three coefficients".into()));
    }
    if !coeffs.iter().all(|&c| g.is_unit(c)) {
        return Ok(Err("a coefficient is not coprime to N".into()));
    }
    if !is_solution_free(&a, &coeffs, beta)? {
        return Ok(Err("A contains a solution".into()));
    }
    let delta = a.len() as f64 / g.order() as f64;
    Ok(Ok((a, coeffs.len(), delta)))
}

fn v14(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let (a, n, delta) = match solution_free_premise(g, inst)? {
        Ok(x) => x,
        Err(reason) => return Ok(Eval::skip(reason)),
    };
    let un = un_of(&a)?.ok_or_else(|| Error::InvalidParameter("solution-free A = G".into()))?;
    let log = (1.0 / delta).ln();
    let mut ev = Eval::default();
    if n == 3 {
        ev.push("un(A) vs log(1/delta)/delta", int(un), Relation::Le, Quantity::Float(log / delta));
        return Ok(ev);
    }
    let l = (n / 2 - 1) as f64;
    ev.push("un(A) vs (2 log(1/delta))^(1/([n/2]-1))", int(un), Relation::Le, Quantity::Float((2.0 * log).powf(1.0 / l)));
    let m0 = (3.0 * log).powf(1.0 / l).floor() as usize + 1;
    for m in [m0, m0 + 1] {
        // Ubar_m(A) < 7/8  <=>  U_m(A) < (7/8)^m
        let lhs = u_n(&a, m)?;
        let rhs = rpow(&BigRational::new(7.into(), 8.into()), m);
        ev.push(&format!("U_{m}(A) vs (7/8)^{m}"), Quantity::Exact(lhs), Relation::Lt, Quantity::Exact(rhs));
    }
    Ok(ev)
}

/// `eps^(2l) |A|^(2l) / N^(l-1)`, the energy threshold at level `l`.
fn energy_threshold(eps: &BigRational, size: usize, n: usize, l: usize) -> BigRational {
    rpow(eps, 2 * l) * BigRational::new(BigInt::from(size).pow(2 * l as u32), BigInt::from(n).pow(l as u32 - 1))
}

fn v15(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let k = inst.usize("k")?;
    let eps = inst.ratio("eps")?;
    if eps <= BigRational::zero() || eps >= BigRational::one() || k == 0 {
        return Err(Error::MalformedInstance("need eps in (0, 1) and k >= 1".into()));
    }
    let n = g.order();
    for l in 1..=k {
        let energy = balanced_energy(&a, l)?;
        if energy > energy_threshold(&eps, a.len(), n, l) {
            return Ok(Eval::skip(format!("energy condition fails at l = {l}")));
        }
    }
    let lhs = u_n(&a, k)?;
    let rhs = rpow(&(BigRational::one() / (BigRational::one() + &eps * &eps)), k);
    let mut ev = Eval::default();
    ev.push("U_k(A) vs (1 + eps^2)^(-k)", Quantity::Exact(lhs), Relation::Gt, Quantity::Exact(rhs));
    Ok(ev)
}

fn v16(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let (a, n, delta) = match solution_free_premise(g, inst)? {
        Ok(x) => x,
        Err(reason) => return Ok(Eval::skip(reason)),
    };
    if n < 4 {
        return Err(Error::MalformedInstance("need at least four coefficients".into()));
    }
    let eps = inst.ratio("eps")?;
    if eps <= BigRational::zero() || eps > BigRational::new(1.into(), 8.into()) {
        return Err(Error::MalformedInstance("need eps in (0, 1/8]".into()));
    }
    let x = (3.0 * (1.0 / delta).ln()).powf(1.0 / (n / 2 - 1) as f64);
    let top = x.floor() as usize + 1;
    if top < 2 {
        return Ok(Eval::skip(format!("range l <= {x:.3} + 1 holds no l >= 2")));
    }
    let mut best: Option<(f64, usize, BigRational, BigRational)> = None;
    for l in 2..=top {
        let e = balanced_energy(&a, l)?;
        let t = energy_threshold(&eps, a.len(), g.order(), l);
        let ratio = ratio_to_f64(&(e.clone() / t.clone()));
        let hit = e >= t;
        let better = match &best {
            None => true,
            Some((r, _, be, bt)) => (hit && be < bt) || (hit == (be >= bt) && ratio > *r),
        };
        if better {
            best = Some((ratio, l, e, t));
        }
    }
    let (_, l, e, t) = best.expect("range is nonempty");
    let mut ev = Eval::default();
    ev.note("l", l);
    ev.note("l_max", top);
    ev.push(&format!("||f_A||_(E_{l})^(2l) vs eps^(2l) delta^(2l) N^(l+1)"), Quantity::Exact(e), Relation::Ge, Quantity::Exact(t));
    Ok(ev)
}

fn v17(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let x = nonempty(g, inst, "X")?;
    if x.is_full() {
        return Ok(Eval::skip("X = G"));
    }
    let ax = shift_intersection(&a, &x)?;
    if ax.is_empty() {
        return Ok(Eval::skip("A_X is empty"));
    }
    let rhs = (cov_full(&a)? - 1) * (cov_full(&x.complement())? - 1) + 1;
    let mut ev = Eval::default();
    ev.push("cov(A_X) vs (cov(A)-1)(cov(X^c)-1) + 1", int(cov_full(&ax)?), Relation::Ge, int(rhs));
    Ok(ev)
}

fn v18(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    if b.is_full() {
        return Ok(Eval::skip("B = G"));
    }
    let cab = cov_full(&sumset(&a, &b)?)?;
    let ca = cov_full(&a)?;
    let cbc = cov_full(&b.complement())?;
    let mut ev = Eval::default();
    ev.push("|B| cov(A+B) vs cov(A)", int(b.len() * cab), Relation::Ge, int(ca));
    ev.push("cov(A) vs (cov(A+B)-1)(cov(B^c)-1) + 1", int(ca), Relation::Ge, int((cab - 1) * (cbc - 1) + 1));
    Ok(ev)
}

fn v19(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let n = g.order() as f64;
    let log_b = (n / b.len() as f64).ln();
    let mut ev = Eval::default();
    let ab = shift_intersection(&a, &b)?;
    if !ab.is_empty() {
        let rhs = n / ab.len() as f64 * log_b + 1.0;
        ev.push("cov(A) vs (N/|A_B|) log(N/|B|) + 1", int(cov_full(&a)?), Relation::Le, Quantity::Float(rhs));
    }
    let apb = sumset(&a, &b)?;
    if !apb.is_full() {
        let rhs = n / (n - apb.len() as f64) * log_b + 1.0;
        ev.push("cov(A^c) vs N/(N-|A+B|) log(N/|B|) + 1", int(cov_full(&a.complement())?), Relation::Le, Quantity::Float(rhs));
    }
    if ev.comparisons.is_empty() {
        return Ok(Eval::skip("A_B is empty and A + B = G"));
    }
    Ok(ev)
}

fn v20(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let x = nonempty(g, inst, "X")?;
    let ax = shift_intersection(&a, &x)?;
    if !a.intersects(&ax)? {
        return Ok(Eval::skip("X is not in A^k - Delta_k(A)"));
    }
    let d = difference_set(&a, &a)?;
    let dx = shift_intersection(&d, &x)?;
    let n = g.order() as f64;
    let rhs = n / a.len() as f64 * (n / ax.len() as f64).ln() + 1.0;
    let mut ev = Eval::default();
    ev.push("cov(D_X) vs (1/alpha) log(N/|A_X|) + 1", int(cov_full(&dx)?), Relation::Le, Quantity::Float(rhs));
    Ok(ev)
}

fn v21(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let sets: Vec<GroupSet> = ["A", "B", "C", "D"]
        .iter()
        .map(|s| nonempty(g, inst, s))
        .collect::<Result<_>>()?;
    let g2 = Arc::new(g.power(2)?);
    let cd = sumset(&sets[2], &sets[3])?;
    let mut target = GroupSet::empty(&g2);
    for a in sets[0].iter() {
        for b in sets[1].iter() {
            for x in cd.iter() {
                target.insert(g.add_raw(a, x) * g.order() + g.add_raw(b, x))?;
            }
        }
    }
    let nn = g.order() as f64;
    let (al, be, ga, de) = (
        sets[0].len() as f64 / nn,
        sets[1].len() as f64 / nn,
        sets[2].len() as f64 / nn,
        sets[3].len() as f64 / nn,
    );
    let rhs = 1.0 / (al * ga) * (1.0 / (be * de)).ln() + 1.0;
    let mut ev = Eval::default();
    ev.push("cov(A x B + Delta_2(C+D)) vs 1/(alpha gamma) log(1/(beta delta)) + 1", int(cov_full(&target)?), Relation::Le, Quantity::Float(rhs));
    Ok(ev)
}

fn v22(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let b = nonempty(g, inst, "B")?;
    let k = sumset(&b, &b)?.len() as f64 / b.len() as f64;
    let beta = b.len() as f64 / g.order() as f64;
    let ca = cov_full(&a)? as f64;
    let second = if beta < 1.0 {
        ca / (2.0 * k.powi(4) * (1.0 / beta).ln())
    } else {
        f64::INFINITY
    };
    let inner = (beta * ca / (2.0 * k.powi(4)).ln()).max(second);
    let rhs = 0.5 * (1.0 / (beta * k.powi(3))).min(inner);
    let lhs = cov_full(&a.union(&b)?)?;
    let mut ev = Eval::default();
    ev.note("cov_A", ca);
    ev.note("ratio", lhs as f64 / rhs);
    ev.push("cov(A ∪ B) vs union lower bound", int(lhs), Relation::Ge, Quantity::Float(rhs));
    Ok(ev)
}

fn prod(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    cartesian_product(a, b, cap())
}

fn diff_len(base: &Arc<Group>, a: &GroupSet, block: usize, b: &GroupSet) -> Result<usize> {
    Ok(gen_diff_set(base, a, &TupleSpec::new(vec![block])?, b, cap())?.len())
}

fn v23(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let (k1, w) = inst.tuples(g, "W")?;
    let (k2, y) = inst.tuples(g, "Y")?;
    let x = inst.set(g, "X")?;
    let z = inst.set(g, "Z")?;
    let mut ev = Eval::default();
    let lhs = w.len() * x.len() * diff_len(g, &y, k2, &z)?;
    let rhs = diff_len(g, &prod(&prod(&w, &y)?, &z)?, k1 + k2 + 1, &x)?;
    ev.push("|W x X||Y - Delta(Z)| vs |W x Y x Z - Delta(X)|", int(lhs), Relation::Le, int(rhs));
    let l = diff_len(g, &prod(&w, &z)?, k1 + 1, &x)?;
    let r = diff_len(g, &prod(&w, &x)?, k1 + 1, &z)?;
    ev.push("|W x Z - Delta(X)| vs |W x X - Delta(Z)|", int(l), Relation::Eq, int(r));
    let k = inst.usize("k")?;
    let parts: Vec<GroupSet> = (1..=k).map(|i| inst.set(g, &format!("A{i}"))).collect::<Result<_>>()?;
    let mut head = parts[0].clone();
    for p in &parts[1..k - 1] {
        head = prod(&head, p)?;
    }
    let full = prod(&head, &parts[k - 1])?;
    let l = diff_len(g, &full, k, &GroupSet::full(g))?;
    let r = g.order() * diff_len(g, &head, k - 1, &parts[k - 1])?;
    ev.push("|A_1 x .. x A_k - Delta_k(G)| vs N |A_1 x .. x A_(k-1) - Delta_(k-1)(A_k)|", int(l), Relation::Eq, int(r));
    Ok(ev)
}

fn v24(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let blocks: Vec<usize> = inst.ints("blocks")?.into_iter().map(|b| b as usize).collect();
    let spec = TupleSpec::new(blocks)?;
    let (ma, a) = inst.tuples(g, "A")?;
    let (nb, b) = inst.tuples(g, "B")?;
    let (nc, c) = inst.tuples(g, "C")?;
    if ma != spec.m() || nb != spec.n() || nc != spec.n() {
        return Err(Error::MalformedInstance("tuple arities do not match the block structure".into()));
    }
    let mut ev = Eval::default();
    let a_minus_b = gen_signed_set(g, &a, &spec, &b, false, cap())?.len();
    let pbc = gen_product_diff_size(g, &a, &b, &c, &spec, cap())?;
    let pcb = gen_product_diff_size(g, &a, &c, &b, &spec, cap())?;
    ev.push("|C||A - Delta(B)| vs |A x B - Delta_(+1)(C)|", int(c.len() * a_minus_b), Relation::Le, Quantity::int(big(pbc)));
    ev.push("|A x B - Delta_(+1)(C)| vs |A x C - Delta_(+1)(B)|", Quantity::int(big(pbc)), Relation::Eq, Quantity::int(big(pcb)));
    for plus in [false, true] {
        let ab = gen_signed_set(g, &a, &spec, &b, plus, cap())?.len();
        let ac = gen_signed_set(g, &a, &spec, &c, plus, cap())?.len();
        let bc = tuple_sumset(g, &b, &c, plus)?.len();
        let sign = if plus { "+" } else { "-" };
        ev.push(
            &format!("|C||A {sign} Delta(B)| vs |A {sign} Delta(C)||B {sign} C|"),
            int(c.len() * ab),
            Relation::Le,
            Quantity::int(BigInt::from(ac) * BigInt::from(bc)),
        );
    }
    Ok(ev)
}

fn v25(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let q = nonempty(g, inst, "Q")?;
    let blocks: Vec<usize> = inst.ints("blocks")?.into_iter().map(|b| b as usize).collect();
    let spec = TupleSpec::new(blocks)?;
    let (n, b) = inst.tuples(g, "B")?;
    if n != spec.n() {
        return Err(Error::MalformedInstance("B arity does not match the block structure".into()));
    }
    let m = spec.m();
    let qq: Vec<BigInt> = (0..g.order())
        .map(|x| BigInt::from(q.intersection(&q.translate(g.neg_raw(x))).map(|s| s.len()).unwrap_or(0)))
        .collect();
    let bs: Vec<Vec<usize>> = b.iter().map(|r| tuple_coords(g, r, n)).collect();
    let mut energy = BigInt::zero();
    for u in &bs {
        for v in &bs {
            let mut term = BigInt::one();
            for (i, &mi) in spec.blocks().iter().enumerate() {
                term *= Pow::pow(&qq[g.sub_raw(u[i], v[i])], mi as u32);
            }
            energy += term;
        }
    }
    let diff = gen_diff_size(&q, &spec, &b, cap())?;
    let lhs = BigInt::from(q.len()).pow(2 * m as u32) * BigInt::from(b.len()).pow(2u32);
    let mut ev = Eval::default();
    ev.push("|Q|^(2m)|B|^2 vs |Q^m - Delta(B)| * energy", Quantity::int(lhs), Relation::Le, Quantity::int(big(diff) * energy));
    Ok(ev)
}

fn v26(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let m = inst.usize("m")?;
    let parts: Vec<GroupSet> = (1..=m).map(|i| nonempty(g, inst, &format!("U{i}"))).collect::<Result<_>>()?;
    let mut product = parts[0].clone();
    for p in &parts[1..] {
        product = prod(&product, p)?;
    }
    let lhs = un_of(&product)?;
    let mut rhs: Option<usize> = None;
    for p in &parts {
        let v = match un_by_profiles(p)? {
            UnValue::Finite { value } => Some(value),
            _ => None,
        };
        rhs = match (rhs, v) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
    }
    let mut ev = Eval::default();
    ev.push("un(U_1 x .. x U_m) vs min_j un(U_j)", un_quantity(lhs), Relation::Eq, un_quantity(rhs));
    Ok(ev)
}

fn v27(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let u = nonempty(g, inst, "U")?;
    let s = nonempty(g, inst, "S")?;
    let m = inst.usize("m")?;
    let Some(k) = un_of(&u)? else {
        return Ok(Eval::skip("U = G"));
    };
    if m == 0 || m > k {
        return Ok(Eval::skip(format!("m = {m} exceeds un(U) = {k}")));
    }
    let n = g.order();
    let sigma = s.len() as f64 / n as f64;
    let lhs = higher_diff_size(&u, m, &s)?;
    let rhs = (n as f64).powi(m as i32) * (1.0 - m as f64 / (k - m + 1) as f64 * (1.0 / sigma).ln());
    let rel = if s.is_full() { Relation::Ge } else { Relation::Gt };
    let mut ev = Eval::default();
    ev.note("k", k);
    ev.push("|U^m - Delta_m(S)| vs N^m (1 - m/(k-m+1) log(1/sigma))", Quantity::int(big(lhs)), rel, Quantity::Float(rhs));
    Ok(ev)
}

fn prime_modulus(g: &Arc<Group>) -> Option<usize> {
    g.prime_field()
}

fn v28(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let Some(p) = prime_modulus(g) else {
        return Ok(Eval::skip("modulus is not prime"));
    };
    // lpf(p) = p > 2p/|A| + 3
    if a.len() * (p - 3) <= 2 * p || p <= 3 {
        return Ok(Eval::skip("least prime factor condition fails"));
    }
    let d = difference_set(&a, &a)?;
    let w = cov_mult(&d, None, CoverOptions::default())?;
    let c = w.cover.exact().ok_or_else(|| Error::InvalidParameter("multiplicative cover budget exhausted".into()))?;
    let mut ev = Eval::default();
    ev.push("cov^x(A - A) vs 1/alpha + 1", int(c), Relation::Le, Quantity::ratio((p + a.len()) as u64, a.len() as u64));
    Ok(ev)
}

fn v29(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let r = nonempty(g, inst, "R")?;
    let p = g.order() as f64;
    let mut ev = Eval::default();
    let c = cov_full(&r)?;
    ev.note("half_log2_p", 0.5 * p.log2());
    ev.note("cov", c);
    ev.push("cov+(R) vs (1/2) log_2 p", int(c), Relation::Ge, Quantity::Float(0.5 * p.log2()));
    ev.reported = true;
    Ok(ev)
}

fn v30(g: &Arc<Group>, inst: &Instance) -> Result<Eval> {
    let a = nonempty(g, inst, "A")?;
    let Some(p) = prime_modulus(g) else {
        return Ok(Eval::skip("modulus is not prime"));
    };
    let d = difference_set(&a, &a)?;
    if d.is_full() {
        return Ok(Eval::skip("A - A = F_p"));
    }
    let w = cov_mult(&d.complement(), None, CoverOptions::default())?;
    let c = w.cover.exact().ok_or_else(|| Error::InvalidParameter("multiplicative cover budget exhausted".into()))?;
    let alpha = a.len() as f64 / p as f64;
    let rhs = ((p - 1) as f64).ln() / (1.0 / alpha).ln();
    let mut ev = Eval::default();
    ev.push("cov^x((A - A)^c) vs log(p-1)/log(1/alpha)", int(c), Relation::Ge, Quantity::Float(rhs));
    Ok(ev)
}
