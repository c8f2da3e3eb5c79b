//! The 21 basic kernels g(z), evaluated on an already transformed vector.
//!
//! Kernels never see `x`, the shift or the rotation, and never add the
//! `F_OPT` bias. Dimension-dependent constants (coefficient tables, the
//! Weierstrass offset) are computed once by [`Kernel::prepare`] and reused
//! for every point.

use std::fmt;

use crate::error::{Error, Result};
use crate::real::Real;

pub const ELLIPTIC_CONDITION: f64 = 1e6;
pub const DISCUS_WEIGHT: f64 = 1e6;
pub const CIGAR_WEIGHT: f64 = 1e6;
pub const SHARP_VALLEY_WEIGHT: f64 = 100.0;

pub const WEIERSTRASS_A: f64 = 0.5;
pub const WEIERSTRASS_B: f64 = 3.0;
pub const WEIERSTRASS_K_MAX: usize = 20;

pub const SCHWEFEL_SHIFT: f64 = 420.9687462275036;
pub const SCHWEFEL_MAGIC: f64 = 418.9829;

pub const KATSUURA_TERMS: i32 = 32;

pub const LUNACEK_MU1: f64 = 2.5;
pub const LUNACEK_MU2: f64 = -2.5;
pub const LUNACEK_D: f64 = 1.0;
pub const LUNACEK_S: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Sphere,
    Ellipsoid,
    Elliptic,
    Discus,
    Cigar,
    Powers,
    SharpValley,
    Step,
    Weierstrass,
    Griewank,
    Rastrigin,
    SchafferF7,
    GriewankRosenbrock,
    Rosenbrock,
    Schwefel,
    Katsuura,
    Lunacek,
    Ackley,
    HappyCat,
    HgBat,
    SchafferF6,
}

impl Kernel {
    pub const ALL: [Kernel; 21] = [
        Kernel::Sphere,
        Kernel::Ellipsoid,
        Kernel::Elliptic,
        Kernel::Discus,
        Kernel::Cigar,
        Kernel::Powers,
        Kernel::SharpValley,
        Kernel::Step,
        Kernel::Weierstrass,
        Kernel::Griewank,
        Kernel::Rastrigin,
        Kernel::SchafferF7,
        Kernel::GriewankRosenbrock,
        Kernel::Rosenbrock,
        Kernel::Schwefel,
        Kernel::Katsuura,
        Kernel::Lunacek,
        Kernel::Ackley,
        Kernel::HappyCat,
        Kernel::HgBat,
        Kernel::SchafferF6,
    ];

    /// Coordinate value at which every component of the canonical optimum sits.
    pub fn optimum_coordinate(self) -> f64 {
        match self {
            Kernel::Rosenbrock | Kernel::GriewankRosenbrock => 1.0,
            Kernel::HappyCat | Kernel::HgBat => -1.0,
            Kernel::Lunacek => LUNACEK_MU1,
            _ => 0.0,
        }
    }

    /// Precomputes the dimension-dependent constants for `dim` variables.
    pub fn prepare<T: Real>(self, dim: usize) -> Prepared<T> {
        let d = T::from_usize(dim);
        let tables = match self {
            Kernel::Elliptic => Tables::Weights(
                (0..dim)
                    .map(|i| T::lit(ELLIPTIC_CONDITION).powf(ramp::<T>(i, dim)))
                    .collect(),
            ),
            Kernel::Powers => Tables::Weights(
                (0..dim)
                    .map(|i| T::lit(2.0) + T::lit(4.0) * ramp::<T>(i, dim))
                    .collect(),
            ),
            Kernel::Griewank => Tables::Weights(
                (0..dim)
                    .map(|i| T::from_usize(i + 1).sqrt().recip())
                    .collect(),
            ),
            Kernel::Weierstrass => {
                let amp: Vec<T> = (0..=WEIERSTRASS_K_MAX)
                    .map(|k| T::lit(WEIERSTRASS_A).powi(k as i32))
                    .collect();
                let freq: Vec<T> = (0..=WEIERSTRASS_K_MAX)
                    .map(|k| T::lit(2.0) * T::PI() * T::lit(WEIERSTRASS_B).powi(k as i32))
                    .collect();
                let offset = weierstrass_term(T::zero(), &amp, &freq);
                Tables::Weierstrass { amp, freq, offset }
            }
            Kernel::Katsuura => Tables::Katsuura {
                exponent: T::lit(10.0) / d.powf(T::lit(1.2)),
                prefactor: T::lit(10.0) / (d * d),
            },
            _ => Tables::None,
        };
        Prepared {
            kernel: self,
            dim,
            tables,
        }
    }

    /// Evaluates the kernel after checking that `z` is non-empty and finite.
    pub fn evaluate<T: Real>(self, z: &[T]) -> Result<T> {
        if z.is_empty() {
            return Err(Error::EmptyInput);
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(self.prepare(z.len()).eval(z))
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone)]
enum Tables<T> {
    None,
    Weights(Vec<T>),
    Weierstrass {
        amp: Vec<T>,
        freq: Vec<T>,
        offset: T,
    },
    Katsuura {
        exponent: T,
        prefactor: T,
    },
}

/// A kernel bound to a fixed dimension with its constants precomputed.
#[derive(Debug, Clone)]
pub struct Prepared<T> {
    kernel: Kernel,
    dim: usize,
    tables: Tables<T>,
}

impl<T: Real> Prepared<T> {
    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Unchecked evaluation; `z.len()` must equal the prepared dimension.
    #[inline]
    pub fn eval(&self, z: &[T]) -> T {
        debug_assert_eq!(z.len(), self.dim);
        match (&self.kernel, &self.tables) {
            (Kernel::Sphere, _) => sphere(z),
            (Kernel::Ellipsoid, _) => ellipsoid(z),
            (Kernel::Elliptic, Tables::Weights(w)) => weighted_squares(z, w),
            (Kernel::Discus, _) => discus(z),
            (Kernel::Cigar, _) => cigar(z),
            (Kernel::Powers, Tables::Weights(e)) => powers_with(z, e),
            (Kernel::SharpValley, _) => sharp_valley(z),
            (Kernel::Step, _) => step(z),
            (Kernel::Weierstrass, Tables::Weierstrass { amp, freq, offset }) => {
                weierstrass_with(z, amp, freq, *offset)
            }
            (Kernel::Griewank, Tables::Weights(w)) => griewank_with(z, w),
            (Kernel::Rastrigin, _) => rastrigin(z),
            (Kernel::SchafferF7, _) => schaffers_f7(z),
            (Kernel::GriewankRosenbrock, _) => grie_rosen(z),
            (Kernel::Rosenbrock, _) => rosenbrock(z),
            (Kernel::Schwefel, _) => schwefel(z),
            (
                Kernel::Katsuura,
                Tables::Katsuura {
                    exponent,
                    prefactor,
                },
            ) => katsuura_with(z, *exponent, *prefactor),
            (Kernel::Lunacek, _) => lunacek(z),
            (Kernel::Ackley, _) => ackley(z),
            (Kernel::HappyCat, _) => happycat(z),
            (Kernel::HgBat, _) => hgbat(z),
            (Kernel::SchafferF6, _) => schaffers_f6(z),
            (k, _) => unreachable!("kernel {k} prepared without its tables"),
        }
    }
}

/// (i - 1) / (D - 1) with 0-based `i`; zero for a single variable.
fn ramp<T: Real>(i: usize, dim: usize) -> T {
    if dim <= 1 {
        T::zero()
    } else {
        T::from_usize(i) / T::from_usize(dim - 1)
    }
}

#[inline]
fn sum_sq<T: Real>(z: &[T]) -> T {
    z.iter().fold(T::zero(), |acc, &v| acc + v * v)
}

pub fn sphere<T: Real>(z: &[T]) -> T {
    sum_sq(z)
}

pub fn ellipsoid<T: Real>(z: &[T]) -> T {
    z.iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &v)| acc + T::from_usize(i + 1) * v * v)
}

fn weighted_squares<T: Real>(z: &[T], w: &[T]) -> T {
    z.iter()
        .zip(w)
        .fold(T::zero(), |acc, (&v, &wi)| acc + wi * v * v)
}

pub fn elliptic<T: Real>(z: &[T]) -> T {
    Kernel::Elliptic.prepare(z.len()).eval(z)
}

pub fn discus<T: Real>(z: &[T]) -> T {
    T::lit(DISCUS_WEIGHT) * z[0] * z[0] + sum_sq(&z[1..])
}

pub fn cigar<T: Real>(z: &[T]) -> T {
    z[0] * z[0] + T::lit(CIGAR_WEIGHT) * sum_sq(&z[1..])
}

fn powers_with<T: Real>(z: &[T], exponents: &[T]) -> T {
    z.iter()
        .zip(exponents)
        .fold(T::zero(), |acc, (&v, &e)| acc + v.abs().powf(e))
        .sqrt()
}

pub fn powers<T: Real>(z: &[T]) -> T {
    Kernel::Powers.prepare(z.len()).eval(z)
}

pub fn sharp_valley<T: Real>(z: &[T]) -> T {
    z[0] * z[0] + T::lit(SHARP_VALLEY_WEIGHT) * sum_sq(&z[1..]).sqrt()
}

pub fn step<T: Real>(z: &[T]) -> T {
    z.iter().fold(T::zero(), |acc, &v| {
        let s = (v + T::lit(0.5)).floor();
        acc + s * s
    })
}

#[inline]
fn weierstrass_term<T: Real>(v: T, amp: &[T], freq: &[T]) -> T {
    let u = v + T::lit(0.5);
    amp.iter()
        .zip(freq)
        .fold(T::zero(), |acc, (&a, &f)| acc + a * (f * u).cos())
}

fn weierstrass_with<T: Real>(z: &[T], amp: &[T], freq: &[T], offset: T) -> T {
    let total = z
        .iter()
        .fold(T::zero(), |acc, &v| acc + weierstrass_term(v, amp, freq));
    total - T::from_usize(z.len()) * offset
}

pub fn weierstrass<T: Real>(z: &[T]) -> T {
    Kernel::Weierstrass.prepare(z.len()).eval(z)
}

fn griewank_with<T: Real>(z: &[T], inv_sqrt: &[T]) -> T {
    let mut sum = T::zero();
    let mut prod = T::one();
    for (&v, &w) in z.iter().zip(inv_sqrt) {
        sum = sum + v * v;
        prod = prod * (v * w).cos();
    }
    sum / T::lit(4000.0) - prod + T::one()
}

pub fn griewank<T: Real>(z: &[T]) -> T {
    Kernel::Griewank.prepare(z.len()).eval(z)
}

pub fn rastrigin<T: Real>(z: &[T]) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let ten = T::lit(10.0);
    z.iter().fold(T::zero(), |acc, &v| {
        acc + (v * v - ten * (two_pi * v).cos() + ten)
    })
}

pub fn schaffers_f7<T: Real>(z: &[T]) -> T {
    if z.len() < 2 {
        return T::zero();
    }
    let sum = z.windows(2).fold(T::zero(), |acc, p| {
        let w = (p[0] * p[0] + p[1] * p[1]).sqrt();
        let s = (T::lit(50.0) * w.powf(T::lit(0.2))).sin();
        acc + (T::one() + s * s) * w.sqrt()
    });
    let mean = sum / T::from_usize(z.len() - 1);
    mean * mean
}

/// Rosenbrock term on a pair of variables.
pub fn g2_rosenbrock_pair<T: Real>(x: T, y: T) -> T {
    let a = x * x - y;
    let b = x - T::one();
    T::lit(100.0) * a * a + b * b
}

/// One-dimensional Griewank.
pub fn g3_griewank_1d<T: Real>(x: T) -> T {
    x * x / T::lit(4000.0) - x.cos() + T::one()
}

/// Cyclic chain of `g3(g2(z_i, z_{i+1}))`, closing with the pair `(z_D, z_1)`.
pub fn grie_rosen<T: Real>(z: &[T]) -> T {
    let n = z.len();
    (0..n).fold(T::zero(), |acc, i| {
        acc + g3_griewank_1d(g2_rosenbrock_pair(z[i], z[(i + 1) % n]))
    })
}

pub fn rosenbrock<T: Real>(z: &[T]) -> T {
    z.windows(2)
        .fold(T::zero(), |acc, p| acc + g2_rosenbrock_pair(p[0], p[1]))
}

/// Floored modulo by 500; non-negative for every finite input.
#[inline]
fn bmod500<T: Real>(a: T) -> T {
    let m = T::lit(500.0);
    a - m * (a / m).floor()
}

/// Piecewise Schwefel term with the quadratic out-of-range penalty.
pub fn schwefel_g1<T: Real>(w: T, dim: usize) -> T {
    let five_hundred = T::lit(500.0);
    let penalty_scale = T::lit(10000.0) * T::from_usize(dim);
    if w.abs() <= five_hundred {
        w * w.abs().sqrt().sin()
    } else if w > five_hundred {
        let r = five_hundred - bmod500(w);
        let e = w - five_hundred;
        r * r.sqrt().sin() - e * e / penalty_scale
    } else {
        let m = bmod500(-w);
        let e = w + five_hundred;
        (m - five_hundred) * (five_hundred - m).sqrt().sin() - e * e / penalty_scale
    }
}

pub fn schwefel<T: Real>(z: &[T]) -> T {
    let dim = z.len();
    let shift = T::lit(SCHWEFEL_SHIFT);
    let total = z
        .iter()
        .fold(T::zero(), |acc, &v| acc + schwefel_g1(v + shift, dim));
    T::lit(SCHWEFEL_MAGIC) * T::from_usize(dim) - total
}

/// Σ_j |2^j v - round(2^j v)| / 2^j for j = 1..=32.
#[inline]
fn katsuura_inner<T: Real>(v: T) -> T {
    let mut sum = T::zero();
    let mut scale = T::one();
    for _ in 0..KATSUURA_TERMS {
        scale = scale * T::lit(2.0);
        let t = scale * v;
        sum = sum + (t - t.round()).abs() / scale;
    }
    sum
}

fn katsuura_with<T: Real>(z: &[T], exponent: T, prefactor: T) -> T {
    // Product evaluated as a sum of logs; the direct product overflows at large D.
    let log_prod = z.iter().enumerate().fold(T::zero(), |acc, (i, &v)| {
        acc + exponent * (T::from_usize(i + 1) * katsuura_inner(v)).ln_1p()
    });
    prefactor * log_prod.exp() - prefactor
}

pub fn katsuura<T: Real>(z: &[T]) -> T {
    Kernel::Katsuura.prepare(z.len()).eval(z)
}

pub fn lunacek<T: Real>(z: &[T]) -> T {
    let mu1 = T::lit(LUNACEK_MU1);
    let mu2 = T::lit(LUNACEK_MU2);
    let d = T::from_usize(z.len());
    let two_pi = T::lit(2.0) * T::PI();
    let mut near = T::zero();
    let mut far = T::zero();
    let mut cosines = T::zero();
    for &v in z {
        let a = v - mu1;
        let b = v - mu2;
        near = near + a * a;
        far = far + b * b;
        cosines = cosines + (two_pi * a).cos();
    }
    let far = T::lit(LUNACEK_D) * d + T::lit(LUNACEK_S) * far;
    near.min(far) + T::lit(10.0) * (d - cosines)
}

pub fn ackley<T: Real>(z: &[T]) -> T {
    let d = T::from_usize(z.len());
    let two_pi = T::lit(2.0) * T::PI();
    let (sq, cs) = z.iter().fold((T::zero(), T::zero()), |(s, c), &v| {
        (s + v * v, c + (two_pi * v).cos())
    });
    -T::lit(20.0) * (-T::lit(0.2) * (sq / d).sqrt()).exp() - (cs / d).exp() + T::lit(20.0) + T::E()
}

fn sums<T: Real>(z: &[T]) -> (T, T) {
    z.iter()
        .fold((T::zero(), T::zero()), |(sq, s), &v| (sq + v * v, s + v))
}

pub fn happycat<T: Real>(z: &[T]) -> T {
    let d = T::from_usize(z.len());
    let (sq, s) = sums(z);
    (sq - d).abs().powf(T::lit(0.25)) + (T::lit(0.5) * sq + s) / d + T::lit(0.5)
}

pub fn hgbat<T: Real>(z: &[T]) -> T {
    let d = T::from_usize(z.len());
    let (sq, s) = sums(z);
    (sq * sq - s * s).abs().sqrt() + (T::lit(0.5) * sq + s) / d + T::lit(0.5)
}

/// Schaffer's F6 on a pair of variables.
pub fn g4_schaffer_f6_pair<T: Real>(x: T, y: T) -> T {
    let r2 = x * x + y * y;
    let s = r2.sqrt().sin();
    let den = T::one() + T::lit(0.001) * r2;
    (s * s - T::lit(0.5)) / (den * den) + T::lit(0.5)
}

pub fn schaffers_f6<T: Real>(z: &[T]) -> T {
    let n = z.len();
    (0..n).fold(T::zero(), |acc, i| {
        acc + g4_schaffer_f6_pair(z[i], z[(i + 1) % n])
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, PI};

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    /// Straightforward reference formulas, written without the shared helpers above.
    mod oracle {
        use std::f64::consts::{E, PI};

        pub fn eval(kernel: super::Kernel, z: &[f64]) -> f64 {
            use super::Kernel::*;
            let d = z.len();
            let df = d as f64;
            match kernel {
                Sphere => z.iter().map(|v| v * v).sum(),
                Ellipsoid => (0..d).map(|i| (i + 1) as f64 * z[i] * z[i]).sum(),
                Elliptic => (0..d)
                    .map(|i| 1e6f64.powf(i as f64 / (df - 1.0)) * z[i] * z[i])
                    .sum(),
                Discus => 1e6 * z[0] * z[0] + (1..d).map(|i| z[i] * z[i]).sum::<f64>(),
                Cigar => z[0] * z[0] + 1e6 * (1..d).map(|i| z[i] * z[i]).sum::<f64>(),
                Powers => (0..d)
                    .map(|i| z[i].abs().powf(2.0 + 4.0 * i as f64 / (df - 1.0)))
                    .sum::<f64>()
                    .sqrt(),
                SharpValley => {
                    z[0] * z[0] + 100.0 * (1..d).map(|i| z[i] * z[i]).sum::<f64>().sqrt()
                }
                Step => z.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
                Weierstrass => {
                    let mut total = 0.0;
                    for v in z {
                        for k in 0..=20 {
                            total += 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * (v + 0.5)).cos();
                        }
                    }
                    let mut c = 0.0;
                    for k in 0..=20 {
                        c += 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * 0.5).cos();
                    }
                    total - df * c
                }
                Griewank => {
                    let s: f64 = z.iter().map(|v| v * v / 4000.0).sum();
                    let p: f64 = (0..d)
                        .map(|i| (z[i] / ((i + 1) as f64).sqrt()).cos())
                        .product();
                    s - p + 1.0
                }
                Rastrigin => z
                    .iter()
                    .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                    .sum(),
                SchafferF7 => {
                    let mut s = 0.0;
                    for i in 0..d - 1 {
                        let w = (z[i] * z[i] + z[i + 1] * z[i + 1]).sqrt();
                        s += (1.0 + (50.0 * w.powf(0.2)).sin().powi(2)) * w.sqrt();
                    }
                    (s / (df - 1.0)).powi(2)
                }
                GriewankRosenbrock => {
                    let g2 = |x: f64, y: f64| 100.0 * (x * x - y).powi(2) + (x - 1.0).powi(2);
                    let g3 = |x: f64| x * x / 4000.0 - x.cos() + 1.0;
                    let mut s = 0.0;
                    for i in 0..d - 1 {
                        s += g3(g2(z[i], z[i + 1]));
                    }
                    s + g3(g2(z[d - 1], z[0]))
                }
                Rosenbrock => (0..d - 1)
                    .map(|i| 100.0 * (z[i] * z[i] - z[i + 1]).powi(2) + (z[i] - 1.0).powi(2))
                    .sum(),
                Schwefel => {
                    let mut s = 0.0;
                    for v in z {
                        s += g1(v + 420.9687462275036, df);
                    }
                    418.9829 * df - s
                }
                Katsuura => {
                    let mut prod = 1.0;
                    for (i, &zi) in z.iter().enumerate() {
                        let mut s = 0.0;
                        for j in 1..=32 {
                            let t = 2f64.powi(j) * zi;
                            s += (t - t.round()).abs() / 2f64.powi(j);
                        }
                        prod *= (1.0 + (i + 1) as f64 * s).powf(10.0 / df.powf(1.2));
                    }
                    10.0 / (df * df) * prod - 10.0 / (df * df)
                }
                Lunacek => {
                    let a: f64 = z.iter().map(|v| (v - 2.5).powi(2)).sum();
                    let b: f64 = df + 0.9 * z.iter().map(|v| (v + 2.5).powi(2)).sum::<f64>();
                    let c: f64 = z.iter().map(|v| (2.0 * PI * (v - 2.5)).cos()).sum();
                    a.min(b) + 10.0 * (df - c)
                }
                Ackley => {
                    let a: f64 = z.iter().map(|v| v * v).sum::<f64>() / df;
                    let b: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / df;
                    -20.0 * (-0.2 * a.sqrt()).exp() - b.exp() + 20.0 + E
                }
                HappyCat => {
                    let sq: f64 = z.iter().map(|v| v * v).sum();
                    let s: f64 = z.iter().sum();
                    (sq - df).abs().powf(0.25) + (0.5 * sq + s) / df + 0.5
                }
                HgBat => {
                    let sq: f64 = z.iter().map(|v| v * v).sum();
                    let s: f64 = z.iter().sum();
                    (sq * sq - s * s).abs().sqrt() + (0.5 * sq + s) / df + 0.5
                }
                SchafferF6 => {
                    let g4 = |x: f64, y: f64| {
                        let r = x * x + y * y;
                        (r.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r).powi(2) + 0.5
                    };
                    let mut s = 0.0;
                    for i in 0..d - 1 {
                        s += g4(z[i], z[i + 1]);
                    }
                    s + g4(z[d - 1], z[0])
                }
            }
        }

        pub fn g1(w: f64, df: f64) -> f64 {
            if w.abs() <= 500.0 {
                w * w.abs().sqrt().sin()
            } else if w > 500.0 {
                let m = w.rem_euclid(500.0);
                (500.0 - m) * (500.0 - m).sqrt().sin() - (w - 500.0).powi(2) / (10000.0 * df)
            } else {
                let m = (-w).rem_euclid(500.0);
                (m - 500.0) * (500.0 - m).sqrt().sin() - (w + 500.0).powi(2) / (10000.0 * df)
            }
        }
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    fn random_z(rng: &mut ChaCha8Rng, d: usize, bound: f64) -> Vec<f64> {
        (0..d).map(|_| rng.random_range(-bound..bound)).collect()
    }

    #[test]
    fn zero_at_canonical_optimum() {
        for kernel in Kernel::ALL {
            for d in [2, 3, 10, 33] {
                let z = vec![kernel.optimum_coordinate(); d];
                let v = kernel.evaluate(&z).unwrap();
                if kernel == Kernel::Schwefel {
                    assert!(v.abs() <= 3e-4 * d as f64, "{kernel} d={d}: {v}");
                } else {
                    assert!(v.abs() < 1e-12, "{kernel} d={d}: {v}");
                }
            }
        }
    }

    #[test]
    fn matches_oracle_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kernel in Kernel::ALL {
            for d in [2, 5, 10, 17] {
                for _ in 0..20 {
                    let z = random_z(&mut rng, d, 5.0);
                    let got = kernel.evaluate(&z).unwrap();
                    let want = oracle::eval(kernel, &z);
                    assert!(close(got, want, 1e-10), "{kernel} d={d}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(sphere(&[3.0, 4.0]), 25.0);
        assert_eq!(ellipsoid(&[1.0, 1.0]), 3.0);
        assert_eq!(elliptic(&[1.0, 1.0]), 1_000_001.0);
        assert_eq!(discus(&[1.0, 1.0]), 1_000_001.0);
        assert_eq!(cigar(&[1.0, 1.0]), 1_000_001.0);
        assert!((powers(&[1.0, -1.0]) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sharp_valley(&[1.0, 2.0]), 201.0);
        assert_eq!(step(&[0.4, -0.6]), 1.0);
        assert!((rastrigin(&[0.5f64]) - 20.25).abs() < 1e-12);
        assert_eq!(g2_rosenbrock_pair(1.0, 1.0), 0.0);
        assert_eq!(g2_rosenbrock_pair(0.0, 0.0), 1.0);
        assert_eq!(g2_rosenbrock_pair(2.0, 1.0), 901.0);
        assert_eq!(g3_griewank_1d(0.0), 0.0);
        assert!((g3_griewank_1d(PI) - (PI * PI / 4000.0 + 2.0)).abs() < 1e-15);
        assert!((grie_rosen(&[0.0f64, 0.0]) - 2.0 * g3_griewank_1d(1.0)).abs() < 1e-15);
        assert_eq!(rosenbrock(&[0.0, 0.0]), 1.0);
        assert_eq!(rosenbrock(&[1.0; 6]), 0.0);
        assert_eq!(schwefel_g1(0.0, 10), 0.0);
        assert!((lunacek(&[-2.5f64, -2.5]) - 2.0).abs() < 1e-12);
        let ack = -20.0 * (-0.1f64).exp() - (-1.0f64).exp() + 20.0 + E;
        assert!((ackley(&[0.5]) - ack).abs() < 1e-14);
        assert_eq!(happycat(&[0.0]), 1.5);
        assert_eq!(hgbat(&[1.0, 0.0]), 1.25);
        assert_eq!(g4_schaffer_f6_pair(0.0, 0.0), 0.0);
        let half_pi = PI / 2.0;
        let want = 0.5 / (1.0 + 0.001 * half_pi * half_pi).powi(2) + 0.5;
        assert!((g4_schaffer_f6_pair(half_pi, 0.0) - want).abs() < 1e-15);
        assert!((schaffers_f6(&[1.0f64, 0.0]) - 2.0 * g4_schaffer_f6_pair(1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn oracle_spot_values() {
        // Frozen from the direct-summation oracle.
        let w = oracle::eval(Kernel::Weierstrass, &[0.5, 0.0]);
        assert!((weierstrass(&[0.5, 0.0]) - w).abs() < 1e-12);
        let g = oracle::eval(Kernel::Griewank, &[100.0, 0.0]);
        assert!((g - (2.5 - 100f64.cos() + 1.0)).abs() < 1e-12);
        assert!((griewank(&[100.0, 0.0]) - g).abs() < 1e-12);
        let f7 = oracle::eval(Kernel::SchafferF7, &[1.0, 0.0]);
        assert!((schaffers_f7(&[1.0, 0.0]) - f7).abs() < 1e-14);
        let k = oracle::eval(Kernel::Katsuura, &[0.5, 0.0]);
        assert!((katsuura(&[0.5, 0.0]) - k).abs() < 1e-12);
        let g1 = oracle::g1(600.0, 10.0);
        assert!((schwefel_g1(600.0, 10) - g1).abs() < 1e-12);
    }

    #[test]
    fn schwefel_constants() {
        let g = schwefel_g1(SCHWEFEL_SHIFT, 10);
        assert!((g - 418.9829).abs() < 1e-4, "{g}");
        assert!(schwefel(&[0.0f64; 10]).abs() <= 3e-4 * 10.0);
    }

    #[test]
    fn schwefel_continuous_at_branch_boundary() {
        // z = 500 - shift puts w exactly on the boundary.
        let z0 = 500.0 - SCHWEFEL_SHIFT;
        let at = schwefel(&[z0]);
        for eps in [1e-9, 1e-7] {
            assert!((schwefel(&[z0 + eps]) - at).abs() < 1e-4);
            assert!((schwefel(&[z0 - eps]) - at).abs() < 1e-4);
        }
        assert!((at - oracle::eval(Kernel::Schwefel, &[z0])).abs() < 1e-12);
        let lo = -500.0 - SCHWEFEL_SHIFT;
        assert!((schwefel(&[lo - 1e-9]) - schwefel(&[lo])).abs() < 1e-4);
    }

    #[test]
    fn bmod_is_floored() {
        assert_eq!(bmod500(600.0f64), 100.0);
        assert_eq!(bmod500(-100.0f64), 400.0);
        assert_eq!(bmod500(1000.0f64), 0.0);
    }

    #[test]
    fn katsuura_survives_large_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = random_z(&mut rng, 512, 5.0);
        assert!(katsuura(&z).is_finite());
    }

    #[test]
    fn checked_evaluation_errors() {
        assert!(matches!(
            Kernel::Sphere.evaluate(&[1.0, f64::NAN]),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(
            Kernel::Ackley.evaluate(&[f64::INFINITY, 0.0]),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(
            Kernel::Sphere.evaluate::<f64>(&[]),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn single_variable_is_defined() {
        for kernel in Kernel::ALL {
            let v = kernel.evaluate(&[0.3f64]).unwrap();
            assert!(v.is_finite(), "{kernel}");
        }
    }

    #[test]
    fn single_precision_tracks_double() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kernel in Kernel::ALL {
            let tol = match kernel {
                Kernel::Katsuura | Kernel::Weierstrass => 1e-2,
                _ => 1e-3,
            };
            for _ in 0..20 {
                let z = random_z(&mut rng, 10, 3.0);
                let zf: Vec<f32> = z.iter().map(|&v| v as f32).collect();
                let zd: Vec<f64> = zf.iter().map(|&v| v as f64).collect();
                let d = kernel.evaluate(&zd).unwrap();
                let s = kernel.evaluate(&zf).unwrap() as f64;
                // +100 mirrors the bias that is present in every reported value.
                assert!(
                    ((s + 100.0) - (d + 100.0)).abs() <= tol * (d + 100.0).abs(),
                    "{kernel}: {s} vs {d}"
                );
            }
        }
    }

    const SYMMETRIC: [Kernel; 5] = [
        Kernel::Sphere,
        Kernel::Rastrigin,
        Kernel::Ackley,
        Kernel::HappyCat,
        Kernel::HgBat,
    ];

    const NON_NEGATIVE: [Kernel; 17] = [
        Kernel::Sphere,
        Kernel::Ellipsoid,
        Kernel::Elliptic,
        Kernel::Discus,
        Kernel::Cigar,
        Kernel::Powers,
        Kernel::SharpValley,
        Kernel::Step,
        Kernel::Griewank,
        Kernel::Rastrigin,
        Kernel::SchafferF7,
        Kernel::GriewankRosenbrock,
        Kernel::Rosenbrock,
        Kernel::Katsuura,
        Kernel::Ackley,
        Kernel::SchafferF6,
        Kernel::Weierstrass,
    ];

    proptest! {
        #[test]
        fn symmetric_kernels_ignore_order(
            z in prop::collection::vec(-50.0f64..50.0, 2..16),
            rot in 0usize..16,
        ) {
            let mut p = z.clone();
            p.rotate_left(rot % z.len());
            p.reverse();
            for kernel in SYMMETRIC {
                let a = kernel.evaluate(&z).unwrap();
                let b = kernel.evaluate(&p).unwrap();
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} {} {}", kernel, a, b);
            }
        }

        #[test]
        fn non_negative_on_random_inputs(z in prop::collection::vec(-100.0f64..100.0, 2..16)) {
            for kernel in NON_NEGATIVE {
                let v = kernel.evaluate(&z).unwrap();
                // Weierstrass and Ackley reach zero through cancellation.
                prop_assert!(v >= -1e-9, "{} {}", kernel, v);
            }
        }
    }
}
