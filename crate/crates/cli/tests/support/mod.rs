//! Test-side reference evaluation, written from the function definitions
//! without touching the library's evaluation code. Only the random data of an
//! instance (shift, permutation, rotation blocks) is taken from the library.

#![allow(dead_code)]

use std::f64::consts::{E, PI};

use realbench::transforms::{Instance, Structure};

/// Input mapping of a basic function: `z = R(scale·(x − o) + pre) + post`.
#[derive(Debug, Clone, Copy)]
pub struct Map {
    pub scale: f64,
    pub rotated: bool,
    pub pre: f64,
    pub post: f64,
}

const fn map(scale: f64, rotated: bool, pre: f64, post: f64) -> Map {
    Map {
        scale,
        rotated,
        pre,
        post,
    }
}

/// Transcribed from the function table, indexed by id 0..=22.
pub const BASIC: [Map; 23] = [
    map(1.0, true, 0.0, 0.0),     // sphere
    map(1.0, true, 0.0, 0.0),     // ellipsoid
    map(1.0, true, 0.0, 0.0),     // elliptic
    map(1.0, true, 0.0, 0.0),     // discus
    map(1.0, true, 0.0, 0.0),     // bent cigar
    map(0.01, true, 0.0, 0.0),    // different powers
    map(1.0, true, 0.0, 0.0),     // sharp valley
    map(1.0, true, 0.0, 0.0),     // step
    map(0.005, true, 0.0, 0.0),   // weierstrass
    map(6.0, true, 0.0, 0.0),     // griewank
    map(0.0512, false, 0.0, 0.0), // rastrigin
    map(0.0512, true, 0.0, 0.0),  // rotated rastrigin
    map(1.0, true, 0.0, 0.0),     // schaffer f7
    map(0.05, true, 0.0, 1.0),    // griewank-rosenbrock
    map(0.02048, true, 0.0, 1.0), // rosenbrock
    map(10.0, false, 0.0, 0.0),   // schwefel
    map(10.0, true, 0.0, 0.0),    // rotated schwefel
    map(0.05, true, 0.0, 0.0),    // katsuura
    map(0.1, true, 2.5, 0.0),     // lunacek
    map(1.0, true, 0.0, 0.0),     // ackley
    map(0.05, true, 0.0, -1.0),   // happycat
    map(0.05, true, 0.0, -1.0),   // hgbat
    map(1.0, true, 0.0, 0.0),     // expanded schaffer f6
];

/// Kernel minimizer coordinate for each basic id.
pub fn kernel_argmin(id: usize) -> f64 {
    match id {
        13 | 14 => 1.0,
        18 => 2.5,
        20 | 21 => -1.0,
        _ => 0.0,
    }
}

pub struct HybridDef {
    pub percent: &'static [usize],
    pub parts: &'static [usize],
}

pub const HYBRIDS: [HybridDef; 6] = [
    HybridDef {
        percent: &[30, 30, 40],
        parts: &[16, 11, 2],
    },
    HybridDef {
        percent: &[30, 30, 40],
        parts: &[4, 21, 11],
    },
    HybridDef {
        percent: &[20, 20, 30, 30],
        parts: &[9, 8, 14, 22],
    },
    HybridDef {
        percent: &[20, 20, 30, 30],
        parts: &[21, 3, 13, 11],
    },
    HybridDef {
        percent: &[10, 20, 20, 20, 30],
        parts: &[22, 21, 14, 16, 2],
    },
    HybridDef {
        percent: &[10, 20, 20, 20, 30],
        parts: &[17, 20, 13, 16, 19],
    },
];

pub struct CompositionDef {
    pub sigma: &'static [f64],
    pub lambda: &'static [f64],
    pub bias: &'static [f64],
    pub parts: &'static [usize],
}

pub const COMPOSITIONS: [CompositionDef; 8] = [
    CompositionDef {
        sigma: &[10.0, 20.0, 30.0, 40.0, 50.0],
        lambda: &[1e-10, 1e-6, 1e-26, 1e-6, 1e-6],
        bias: &[0.0, 100.0, 200.0, 300.0, 400.0],
        parts: &[14, 2, 4, 3, 2],
    },
    CompositionDef {
        sigma: &[15.0, 15.0, 15.0],
        lambda: &[1.0, 1.0, 1.0],
        bias: &[0.0, 100.0, 200.0],
        parts: &[16, 11, 21],
    },
    CompositionDef {
        sigma: &[20.0, 50.0, 40.0],
        lambda: &[0.25, 1.0, 1e-7],
        bias: &[0.0, 100.0, 200.0],
        parts: &[16, 11, 2],
    },
    CompositionDef {
        sigma: &[20.0, 15.0, 10.0, 10.0, 40.0],
        lambda: &[2.5e-2, 0.1, 1e-8, 0.25, 1.0],
        bias: &[0.0, 100.0, 200.0, 300.0, 400.0],
        parts: &[16, 20, 2, 8, 9],
    },
    CompositionDef {
        sigma: &[15.0, 15.0, 15.0, 15.0, 15.0],
        lambda: &[10.0, 10.0, 2.5, 2.5, 1e-6],
        bias: &[0.0, 100.0, 200.0, 300.0, 400.0],
        parts: &[21, 11, 2, 8, 16],
    },
    CompositionDef {
        sigma: &[10.0, 20.0, 30.0, 40.0, 50.0],
        lambda: &[2.5, 10.0, 2.5, 5e-4, 1e-6],
        bias: &[0.0, 100.0, 200.0, 300.0, 400.0],
        parts: &[13, 20, 16, 22, 2],
    },
    CompositionDef {
        sigma: &[10.0, 30.0, 50.0],
        lambda: &[1.0, 1.0, 1.0],
        bias: &[0.0, 100.0, 200.0],
        parts: &[23, 24, 25],
    },
    CompositionDef {
        sigma: &[10.0, 30.0, 50.0],
        lambda: &[1.0, 1.0, 1.0],
        bias: &[0.0, 100.0, 200.0],
        parts: &[26, 27, 28],
    },
];

/// Ids whose kernels are polynomials in `z` (before the bias).
pub fn is_polynomial(id: usize) -> bool {
    matches!(id, 0 | 1 | 2 | 3 | 4 | 6 | 7 | 14)
}

/// Functions with a Weierstrass or Katsuura part somewhere inside.
pub fn has_fractal_part(id: usize) -> bool {
    match id {
        8 | 17 => true,
        23..=28 => HYBRIDS[id - 23].parts.iter().any(|&p| has_fractal_part(p)),
        29..=36 => COMPOSITIONS[id - 29]
            .parts
            .iter()
            .any(|&p| has_fractal_part(p)),
        _ => false,
    }
}

/// Functions with a Schwefel part somewhere inside.
pub fn has_schwefel(id: usize) -> bool {
    match id {
        15 | 16 => true,
        23..=28 => HYBRIDS[id - 23].parts.iter().any(|&p| has_schwefel(p)),
        29..=36 => COMPOSITIONS[id - 29].parts.iter().any(|&p| has_schwefel(p)),
        _ => false,
    }
}

pub fn kernel(id: usize, z: &[f64]) -> f64 {
    let n = z.len();
    let d = n as f64;
    let sq = |v: f64| v * v;
    match id {
        0 => z.iter().map(|&v| sq(v)).sum(),
        1 => z
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as f64 + 1.0) * sq(v))
            .sum(),
        2 => {
            if n == 1 {
                return sq(z[0]);
            }
            let mut s = 0.0;
            for (i, &v) in z.iter().enumerate() {
                s += 10f64.powf(6.0 * i as f64 / (d - 1.0)) * sq(v);
            }
            s
        }
        3 => 1e6 * sq(z[0]) + z[1..].iter().map(|&v| sq(v)).sum::<f64>(),
        4 => sq(z[0]) + 1e6 * z[1..].iter().map(|&v| sq(v)).sum::<f64>(),
        5 => {
            let mut s = 0.0;
            for (i, &v) in z.iter().enumerate() {
                let e = if n == 1 {
                    2.0
                } else {
                    2.0 + 4.0 * i as f64 / (d - 1.0)
                };
                s += v.abs().powf(e);
            }
            s.sqrt()
        }
        6 => sq(z[0]) + 100.0 * z[1..].iter().map(|&v| sq(v)).sum::<f64>().sqrt(),
        7 => z.iter().map(|&v| sq((v + 0.5).floor())).sum(),
        8 => {
            let w = |v: f64| -> f64 {
                (0..=20)
                    .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * (v + 0.5)).cos())
                    .sum()
            };
            z.iter().map(|&v| w(v)).sum::<f64>() - d * w(0.0)
        }
        9 => {
            let mut prod = 1.0;
            for (i, &v) in z.iter().enumerate() {
                prod *= (v / (i as f64 + 1.0).sqrt()).cos();
            }
            z.iter().map(|&v| sq(v)).sum::<f64>() / 4000.0 - prod + 1.0
        }
        10 | 11 => z
            .iter()
            .map(|&v| sq(v) - 10.0 * (2.0 * PI * v).cos() + 10.0)
            .sum(),
        12 => {
            if n < 2 {
                return 0.0;
            }
            let mut s = 0.0;
            for i in 0..n - 1 {
                let r = (sq(z[i]) + sq(z[i + 1])).sqrt();
                s += r.sqrt() + r.sqrt() * sq((50.0 * r.powf(0.2)).sin());
            }
            sq(s / (d - 1.0))
        }
        13 => {
            let mut s = 0.0;
            for i in 0..n {
                let (a, b) = (z[i], z[(i + 1) % n]);
                let t = 100.0 * sq(sq(a) - b) + sq(a - 1.0);
                s += sq(t) / 4000.0 - t.cos() + 1.0;
            }
            s
        }
        14 => (1..n)
            .map(|i| 100.0 * sq(sq(z[i - 1]) - z[i]) + sq(z[i - 1] - 1.0))
            .sum(),
        15 | 16 => {
            418.9829 * d
                - z.iter()
                    .map(|&v| schwefel_term(v + 420.9687462275036, d))
                    .sum::<f64>()
        }
        17 => {
            let mut prod = 1.0;
            for (i, &v) in z.iter().enumerate() {
                let mut s = 0.0;
                let mut p = 1.0;
                for _ in 0..32 {
                    p *= 2.0;
                    s += (p * v - (p * v).round()).abs() / p;
                }
                prod *= (1.0 + (i as f64 + 1.0) * s).powf(10.0 / d.powf(1.2));
            }
            10.0 / sq(d) * (prod - 1.0)
        }
        18 => {
            let a: f64 = z.iter().map(|&v| sq(v - 2.5)).sum();
            let b: f64 = d + 0.9 * z.iter().map(|&v| sq(v + 2.5)).sum::<f64>();
            let c: f64 = z.iter().map(|&v| 1.0 - (2.0 * PI * (v - 2.5)).cos()).sum();
            a.min(b) + 10.0 * c
        }
        19 => {
            let r = (z.iter().map(|&v| sq(v)).sum::<f64>() / d).sqrt();
            let c = z.iter().map(|&v| (2.0 * PI * v).cos()).sum::<f64>() / d;
            20.0 + E - 20.0 * (-0.2 * r).exp() - c.exp()
        }
        20 => {
            let s2: f64 = z.iter().map(|&v| sq(v)).sum();
            let s1: f64 = z.iter().sum();
            (s2 - d).abs().powf(0.25) + (0.5 * s2 + s1) / d + 0.5
        }
        21 => {
            let s2: f64 = z.iter().map(|&v| sq(v)).sum();
            let s1: f64 = z.iter().sum();
            (sq(s2) - sq(s1)).abs().sqrt() + (0.5 * s2 + s1) / d + 0.5
        }
        22 => {
            let mut s = 0.0;
            for i in 0..n {
                let r2 = sq(z[i]) + sq(z[(i + 1) % n]);
                s += 0.5 + (sq(r2.sqrt().sin()) - 0.5) / sq(1.0 + 0.001 * r2);
            }
            s
        }
        _ => panic!("{id} is not a basic function"),
    }
}

fn schwefel_term(w: f64, d: f64) -> f64 {
    if w > 500.0 {
        let m = 500.0 - w % 500.0;
        m * m.sqrt().sin() - sq(w - 500.0) / (10000.0 * d)
    } else if w < -500.0 {
        let m = (-w) % 500.0 - 500.0;
        m * m.abs().sqrt().sin() - sq(w + 500.0) / (10000.0 * d)
    } else {
        w * w.abs().sqrt().sin()
    }
}

fn sq(v: f64) -> f64 {
    v * v
}

/// Applies block `k` of a layout: `out[idx[i]] = Σ_j B[i][j]·y[idx[j]]`.
fn rotate_groups(inst_layout: &realbench::transforms::BlockRotation, y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; y.len()];
    let mut offset = 0;
    for (block, &size) in inst_layout.blocks().iter().zip(inst_layout.sizes()) {
        let idx = &inst_layout.permutation()[offset..offset + size];
        for i in 0..size {
            let mut acc = 0.0;
            for j in 0..size {
                acc += block.row(i)[j] * y[idx[j]];
            }
            out[idx[i]] = acc;
        }
        offset += size;
    }
    out
}

/// Hybrid part sizes from the percentage rule, moving one variable into an
/// empty last part from the largest earlier part (the later one on ties).
pub fn hybrid_sizes(percent: &[usize], dim: usize) -> Vec<usize> {
    let k = percent.len();
    let mut sizes: Vec<usize> = percent[..k - 1]
        .iter()
        .map(|p| (p * dim).div_ceil(100))
        .collect();
    while sizes.iter().sum::<usize>() >= dim {
        let mut best = 0;
        for i in 0..sizes.len() {
            if sizes[i] >= sizes[best] {
                best = i;
            }
        }
        sizes[best] -= 1;
    }
    let used: usize = sizes.iter().sum();
    sizes.push(dim - used);
    sizes
}

/// Function value without the +100 bias.
pub fn value(inst: &Instance, x: &[f64]) -> f64 {
    let id = inst.function.index();
    let dim = x.len();
    match (&inst.structure, id) {
        (Structure::Basic(rot), 0..=22) => {
            let m = BASIC[id];
            let y: Vec<f64> = (0..dim)
                .map(|i| m.scale * (x[i] - inst.shift[i]) + m.pre)
                .collect();
            let r = if m.rotated { rotate_groups(rot, &y) } else { y };
            let z: Vec<f64> = r.iter().map(|v| v + m.post).collect();
            kernel(id, &z)
        }
        (Structure::Hybrid(layout), 23..=28) => {
            let def = &HYBRIDS[id - 23];
            assert_eq!(layout.sizes(), hybrid_sizes(def.percent, dim).as_slice());
            let mut offset = 0;
            let mut total = 0.0;
            for (k, &part) in def.parts.iter().enumerate() {
                let n = layout.sizes()[k];
                let idx = &layout.permutation()[offset..offset + n];
                let m = BASIC[part];
                let block = &layout.blocks()[k];
                let y: Vec<f64> = idx
                    .iter()
                    .map(|&i| m.scale * (x[i] - inst.shift[i]) + m.pre)
                    .collect();
                let z: Vec<f64> = (0..n)
                    .map(|i| (0..n).map(|j| block.row(i)[j] * y[j]).sum::<f64>() + m.post)
                    .collect();
                total += kernel(part, &z);
                offset += n;
            }
            total
        }
        (Structure::Composition(parts), 29..=36) => {
            let def = &COMPOSITIONS[id - 29];
            let dists: Vec<f64> = parts
                .iter()
                .map(|p| x.iter().zip(&p.shift).map(|(a, b)| sq(a - b)).sum::<f64>())
                .collect();
            let w = weights(&dists, def.sigma, dim);
            let mut total = 0.0;
            for (i, p) in parts.iter().enumerate() {
                assert_eq!(p.function.index(), def.parts[i]);
                if w[i] != 0.0 {
                    total += w[i] * (def.lambda[i] * value(p, x) + def.bias[i]);
                }
            }
            total
        }
        _ => panic!("structure of {} does not match its id", inst.function),
    }
}

/// Normalized weights from squared distances; an exact hit selects that component.
pub fn weights(d2: &[f64], sigma: &[f64], dim: usize) -> Vec<f64> {
    if let Some(hit) = d2.iter().position(|&v| v.sqrt() < 1e-12) {
        let mut w = vec![0.0; d2.len()];
        w[hit] = 1.0;
        return w;
    }
    let raw: Vec<f64> = d2
        .iter()
        .zip(sigma)
        .map(|(&v, &s)| (-v / (2.0 * dim as f64 * s * s)).exp() / v.sqrt())
        .collect();
    let total: f64 = raw.iter().sum();
    assert!(total > 0.0, "all weights underflowed");
    raw.iter().map(|r| r / total).collect()
}

/// Location of the global minimum of an instance.
pub fn optimum(inst: &Instance) -> Vec<f64> {
    let id = inst.function.index();
    match &inst.structure {
        Structure::Basic(rot) => {
            let m = BASIC[id];
            let target = kernel_argmin(id) - m.post;
            // Solve R·y = target·1 for y, then x = o + (y − pre)/scale.
            let dim = inst.dim;
            let mut y = vec![target; dim];
            if m.rotated {
                y = vec![0.0; dim];
                let mut offset = 0;
                for (block, &size) in rot.blocks().iter().zip(rot.sizes()) {
                    let idx = &rot.permutation()[offset..offset + size];
                    for j in 0..size {
                        y[idx[j]] = (0..size).map(|i| block.row(i)[j] * target).sum();
                    }
                    offset += size;
                }
            }
            (0..dim)
                .map(|i| inst.shift[i] + (y[i] - m.pre) / m.scale)
                .collect()
        }
        // Every hybrid part has its minimum where its shifted input vanishes.
        Structure::Hybrid(_) => inst.shift.clone(),
        Structure::Composition(parts) => optimum(&parts[0]),
    }
}
