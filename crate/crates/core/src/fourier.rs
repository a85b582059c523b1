//! Fourier analysis on a finite abelian group.
//!
//! The forward transform carries no normalization,
//! `f^(chi) = sum_g f(g) conj(chi(g))`, so Parseval reads
//! `N sum |f|^2 = sum |f^|^2` and `||f||_W = N^-1 sum |f^|`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cyclotomic::CycloInt;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::scalar::{RealScalar, Scalar};
use crate::set::GroupSet;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityFunction<T> {
    group: Arc<Group>,
    values: Vec<T>,
}

impl<T: Scalar> DensityFunction<T> {
    pub fn new(group: &Arc<Group>, values: Vec<T>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Arity {
                expected: group.order(),
                got: values.len(),
            });
        }
        Ok(DensityFunction {
            group: group.clone(),
            values,
        })
    }

    pub fn zero(group: &Arc<Group>) -> Self {
        DensityFunction {
            group: group.clone(),
            values: vec![T::zero(); group.order()],
        }
    }

    pub fn indicator(set: &GroupSet) -> Self {
        let values = (0..set.group().order())
            .map(|x| if set.contains(x) { T::one() } else { T::zero() })
            .collect();
        DensityFunction {
            group: set.group().clone(),
            values,
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Whether the values are carried in exact arithmetic.
    pub fn is_exact(&self) -> bool {
        T::EXACT
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DensityFunction<U> {
        DensityFunction {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn sum(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.group.spec_string(),
                right: other.group.spec_string(),
            })
        }
    }

    /// `(f * g)(x) = sum_y f(y) g(x - y)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let g = &self.group;
        let mut out = vec![T::zero(); g.order()];
        for (y, fy) in self.values.iter().enumerate() {
            if fy.is_zero() {
                continue;
            }
            for (z, gz) in other.values.iter().enumerate() {
                if gz.is_zero() {
                    continue;
                }
                let x = g.add_raw(y, z);
                out[x] = out[x].clone() + fy.clone() * gz.clone();
            }
        }
        Self::new(g, out)
    }

    /// `(f o g)(x) = sum_y f(y) g(y + x)`.
    pub fn correlate(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let g = &self.group;
        let mut out = vec![T::zero(); g.order()];
        for (y, fy) in self.values.iter().enumerate() {
            if fy.is_zero() {
                continue;
            }
            for (z, gz) in other.values.iter().enumerate() {
                if gz.is_zero() {
                    continue;
                }
                let x = g.sub_raw(z, y);
                out[x] = out[x].clone() + fy.clone() * gz.clone();
            }
        }
        Self::new(g, out)
    }
}

impl<T: RealScalar> DensityFunction<T> {
    pub fn to_complex(&self) -> DensityFunction<Complex64> {
        self.map(|v| Complex64::new(v.to_f64(), 0.0))
    }
}

/// `f_A = 1_A - |A|/N`.
pub fn balanced_function<T: RealScalar>(a: &GroupSet) -> DensityFunction<T> {
    let n = a.group().order() as i64;
    let delta = T::from_ratio(a.len() as i64, n);
    let values = (0..a.group().order())
        .map(|x| {
            let one = if a.contains(x) { T::one() } else { T::zero() };
            one - delta.clone()
        })
        .collect();
    DensityFunction {
        group: a.group().clone(),
        values,
    }
}

/// `||f||_{E_k}^{2k} = sum_x (f o f)(x)^k`.
pub fn ek_norm<T: RealScalar>(f: &DensityFunction<T>, k: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let c = f.correlate(f)?;
    Ok(c.values
        .iter()
        .map(|v| pow(v, k))
        .fold(T::zero(), |a, b| a + b))
}

/// [`ek_norm`] for complex input, rejecting functions with an imaginary part.
pub fn ek_norm_complex(f: &DensityFunction<Complex64>, k: usize) -> Result<f64> {
    if f.values.iter().any(|v| v.im.abs() > 1e-12) {
        return Err(Error::ComplexValued);
    }
    ek_norm(&f.map(|v| v.re), k)
}

fn pow<T: Scalar>(v: &T, k: usize) -> T {
    let mut out = T::one();
    for _ in 0..k {
        out = out * v.clone();
    }
    out
}

/// `E_k(A) = sum_x (A o A)(x)^k`.
pub fn higher_energy(a: &GroupSet, k: usize) -> Result<BigInt> {
    let ind = DensityFunction::<i64>::indicator(a);
    let c = ind.correlate(&ind)?;
    Ok(c.values.iter().map(|&v| BigInt::from(v).pow(k as u32)).sum())
}

/// Exact `||f_A||_{E_l}^{2l}` from `(f_A o f_A)(x) = (A o A)(x) - |A|^2 / N`.
pub fn balanced_energy(a: &GroupSet, l: usize) -> Result<BigRational> {
    let ind = DensityFunction::<i64>::indicator(a);
    let c = ind.correlate(&ind)?;
    let n = a.group().order() as i64;
    let shift = Ratio::new(BigInt::from(a.len() * a.len()), BigInt::from(n));
    Ok(c.values
        .iter()
        .map(|&v| {
            let t = Ratio::from_integer(BigInt::from(v)) - shift.clone();
            pow(&t, l)
        })
        .fold(BigRational::zero(), |x, y| x + y))
}

/// Transform along each cyclic factor in turn; `sign = -1` gives the forward transform.
fn transform<F: Float + FloatConst>(g: &Group, data: &mut [Complex<F>], sign: F) {
    let tau = F::TAU();
    for (&n, &stride) in g.factors().iter().zip(g.strides()) {
        if n == 1 {
            continue;
        }
        let nf = F::from(n).expect("factor fits in a float");
        let twiddles: Vec<Complex<F>> = (0..n)
            .map(|k| Complex::from_polar(F::one(), sign * tau * F::from(k).unwrap() / nf))
            .collect();
        let block = n * stride;
        let mut line = vec![Complex::zero(); n];
        for base in (0..g.order()).filter(|r| (r % block) < stride) {
            for (a, slot) in line.iter_mut().enumerate() {
                *slot = data[base + a * stride];
            }
            for c in 0..n {
                let mut acc = Complex::zero();
                for (a, v) in line.iter().enumerate() {
                    acc = acc + *v * twiddles[(c * a) % n];
                }
                data[base + c * stride] = acc;
            }
        }
    }
}

/// `f^(chi) = sum_g f(g) conj(chi(g))`, indexed by character rank.
pub fn dft<F: Float + FloatConst + std::fmt::Debug + Send + Sync + Scalar>(
    f: &DensityFunction<Complex<F>>,
) -> DensityFunction<Complex<F>> {
    let mut data = f.values.clone();
    transform(&f.group, &mut data, -F::one());
    DensityFunction {
        group: f.group.clone(),
        values: data,
    }
}

/// Inverse of [`dft`]: `f(g) = N^-1 sum_chi F(chi) chi(g)`.
pub fn idft<F: Float + FloatConst + std::fmt::Debug + Send + Sync + Scalar>(
    spectrum: &DensityFunction<Complex<F>>,
) -> DensityFunction<Complex<F>> {
    let mut data = spectrum.values.clone();
    transform(&spectrum.group, &mut data, F::one());
    let n = F::from(spectrum.group.order()).unwrap();
    for v in data.iter_mut() {
        *v = *v / n;
    }
    DensityFunction {
        group: spectrum.group.clone(),
        values: data,
    }
}

/// Exact transform of an integer-valued function, as elements of `Z[zeta_L]`
/// with `L` the group exponent.
pub fn dft_exact(f: &DensityFunction<i64>) -> Vec<CycloInt> {
    let g = &f.group;
    let l = g.exponent();
    g.characters()
        .map(|chi| {
            let mut acc = CycloInt::zero(l);
            for (x, &v) in f.values.iter().enumerate() {
                if v != 0 {
                    acc.add_monomial(l - g.pairing(chi.0, x), v);
                }
            }
            acc
        })
        .collect()
}

/// `N sum |f|^2 = sum |f^|^2`, decided exactly for integer-valued `f`.
pub fn parseval_exact(f: &DensityFunction<i64>) -> bool {
    let g = &f.group;
    let l = g.exponent();
    let lhs = g.order() as i64 * f.values.iter().map(|v| v * v).sum::<i64>();
    let rhs = dft_exact(f)
        .into_iter()
        .map(|z| z.clone() * z.conj())
        .fold(CycloInt::zero(l), |a, b| a + b);
    rhs.exact_eq(&CycloInt::constant(l, lhs))
}

/// `||f||_W = N^-1 sum_rho |f^(rho)|`.
pub fn wiener_norm(f: &DensityFunction<Complex64>) -> f64 {
    let t = dft(f);
    t.values.iter().map(|z| z.norm()).sum::<f64>() / f.group.order() as f64
}

/// Characters with `|A^(chi)| >= eps |A|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSet {
    pub eps: f64,
    pub characters: Vec<usize>,
    pub principal_excluded: bool,
}

impl SpectrumSet {
    /// `Spec'_eps = Spec_eps \ {1}`.
    pub fn nontrivial(&self) -> SpectrumSet {
        SpectrumSet {
            eps: self.eps,
            characters: self.characters.iter().copied().filter(|&c| c != 0).collect(),
            principal_excluded: true,
        }
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }
}

const SPECTRUM_TOL: f64 = 1e-9;

pub fn spectrum(a: &GroupSet, eps: f64) -> Result<SpectrumSet> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1]",
        });
    }
    let f = DensityFunction::<f64>::indicator(a).to_complex();
    let t = dft(&f);
    let threshold = eps * a.len() as f64;
    let characters: Vec<usize> = t
        .values
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() >= threshold - SPECTRUM_TOL && z.norm() > SPECTRUM_TOL)
        .map(|(c, _)| c)
        .collect();
    let spec = SpectrumSet {
        eps,
        characters,
        principal_excluded: false,
    };
    if !a.is_empty() {
        let cap = a.group().order() as f64 / (eps * eps * a.len() as f64);
        debug_assert!(spec.nontrivial().len() as f64 <= cap + SPECTRUM_TOL);
    }
    Ok(spec)
}

/// Frequencies `Gamma` and radius `eps` of the Bohr set `B(Gamma, eps)`.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct BohrSpec {
    pub gamma: Vec<usize>,
    pub eps: f64,
}

const BOHR_TOL: f64 = 1e-12;

/// `{x : |chi(x) - 1| <= eps for every chi in Gamma}`.
pub fn bohr_set(group: &Arc<Group>, spec: &BohrSpec) -> Result<GroupSet> {
    if !(spec.eps > 0.0 && spec.eps <= 2.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: spec.eps,
            range: "(0, 2]",
        });
    }
    for &chi in &spec.gamma {
        group.element(chi)?;
    }
    let l = group.exponent();
    Ok(GroupSet::from_predicate(group, |x| {
        spec.gamma.iter().all(|&chi| {
            let root = crate::group::RootOfUnity::new(group.pairing(chi, x), l);
            root.distance_to_one() <= spec.eps + BOHR_TOL
        })
    }))
}

/// Value types that serialize as `[re, im]`.
pub trait ComplexParts {
    fn parts(&self) -> [f64; 2];
}

impl ComplexParts for f64 {
    fn parts(&self) -> [f64; 2] {
        [*self, 0.0]
    }
}

impl ComplexParts for f32 {
    fn parts(&self) -> [f64; 2] {
        [*self as f64, 0.0]
    }
}

impl ComplexParts for i64 {
    fn parts(&self) -> [f64; 2] {
        [*self as f64, 0.0]
    }
}

impl ComplexParts for BigRational {
    fn parts(&self) -> [f64; 2] {
        [crate::scalar::ratio_to_f64(self), 0.0]
    }
}

impl ComplexParts for Ratio<i64> {
    fn parts(&self) -> [f64; 2] {
        [ToPrimitive::to_f64(self).unwrap_or(f64::NAN), 0.0]
    }
}

impl<F: Float> ComplexParts for Complex<F> {
    fn parts(&self) -> [f64; 2] {
        [self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN)]
    }
}

impl<T: ComplexParts> Serialize for DensityFunction<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DensityFunction", 2)?;
        st.serialize_field("group", &self.group.spec_string())?;
        let values: Vec<[f64; 2]> = self.values.iter().map(|v| v.parts()).collect();
        st.serialize_field("values", &values)?;
        st.end()
    }
}
