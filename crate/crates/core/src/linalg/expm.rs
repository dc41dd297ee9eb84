//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! of degree 3, 5, 7, 9 and 13 (Higham 2005 parameter set).

use num_complex::Complex64;

use super::{solve, ComplexMatrix};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(m)` for a general complex square matrix.
pub fn expm(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let norm = m.norm_one();
    if norm == 0.0 {
        return ComplexMatrix::identity(n);
    }

    for &(degree, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &PADE_3,
                5 => &PADE_5,
                7 => &PADE_7,
                _ => &PADE_9,
            };
            return pade_low(m, coeffs);
        }
    }

    let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let scaled = m.scale_real(0.5f64.powi(squarings));
    let mut r = pade_13(&scaled);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

fn combine(u: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    // r = (V − U)^{-1} (V + U)
    let p = v + u;
    let q = v - u;
    solve(&q, &p).expect("Padé denominator is nonsingular within the theta bounds")
}

fn pade_low(a: &ComplexMatrix, b: &[f64]) -> ComplexMatrix {
    let n = a.dim();
    let a2 = a * a;
    let ident = ComplexMatrix::identity(n);
    // even powers I, A², A⁴, ...
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = ComplexMatrix::zeros(n);
    let mut even = ComplexMatrix::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        odd += &p.scale_real(b[2 * k + 1]);
        even += &p.scale_real(b[2 * k]);
    }
    let u = a * &odd;
    combine(&u, &even)
}

fn pade_13(a: &ComplexMatrix) -> ComplexMatrix {
    let b = &PADE_13;
    let n = a.dim();
    let ident = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |terms: &[(&ComplexMatrix, f64)]| {
        let mut acc = ComplexMatrix::zeros(n);
        for (m, c) in terms {
            acc += &m.scale(Complex64::new(*c, 0.0));
        }
        acc
    };
    let u_inner = &a6 * &lin(&[(&a6, b[13]), (&a4, b[11]), (&a2, b[9])]);
    let u_outer = lin(&[(&a6, b[7]), (&a4, b[5]), (&a2, b[3]), (&ident, b[1])]);
    let u = a * &(&u_inner + &u_outer);
    let v_inner = &a6 * &lin(&[(&a6, b[12]), (&a4, b[10]), (&a2, b[8])]);
    let v_outer = lin(&[(&a6, b[6]), (&a4, b[4]), (&a2, b[2]), (&ident, b[0])]);
    let v = &v_inner + &v_outer;
    combine(&u, &v)
}
