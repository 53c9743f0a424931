//! Frozen high-precision values (see scripts/gen_golden.py).

use bagley_torvik::closed_form::{kernel, yc, yf_constant, yf_power, yf_sinusoid};
use bagley_torvik::roots::{weight_a, weight_b};
use bagley_torvik::special::{bessel_j0, fresnel, ml_derivative, mittag_leffler, rgamma, scaled_erfc, MLParams};
use bagley_torvik::{solve_quartic_explicit, BTCoefficients, Complex64, InitialConditions};

fn rows(name: &str) -> Vec<Vec<String>> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn special_functions() {
    let mut checked = 0;
    for row in rows("special_golden.csv") {
        let (f, z) = (row[0].as_str(), Complex64::new(num(&row[1]), num(&row[2])));
        let want = Complex64::new(num(&row[3]), num(&row[4]));
        let tol = num(&row[5]);
        let parts: Vec<&str> = f.split(':').collect();
        let got = match parts[0] {
            "rgamma" => Complex64::new(rgamma(z.re), 0.0),
            "scaled_erfc" => scaled_erfc(z).unwrap(),
            "fresnel_s" => Complex64::new(fresnel(z.re).0, 0.0),
            "fresnel_c" => Complex64::new(fresnel(z.re).1, 0.0),
            "bessel_j0" => Complex64::new(bessel_j0(z.re), 0.0),
            "ml" => mittag_leffler(MLParams::new(num(parts[1]), num(parts[2])), z).unwrap(),
            "mld" => {
                let p = MLParams::derivative(num(parts[1]), num(parts[2]), parts[3].parse().unwrap());
                Complex64::new(ml_derivative(p, z.re).unwrap(), 0.0)
            }
            other => panic!("unknown golden function {other}"),
        };
        // relative for the gamma and erfc/ML rows, absolute for the bounded ones
        let scale = match parts[0] {
            "fresnel_s" | "fresnel_c" | "bessel_j0" => 1.0,
            _ => want.norm().max(1e-300),
        };
        let err = (got - want).norm() / scale;
        assert!(err <= tol, "{f}({z}): got {got}, want {want}, err {err:e}");
        checked += 1;
    }
    assert!(checked >= 40);
}

#[test]
fn closed_form_quantities() {
    let rs = solve_quartic_explicit(BTCoefficients::new(1.3, 2.6, 3.4).unwrap()).unwrap();
    for row in rows("closed_form_golden.csv") {
        let (q, p, want, tol) = (row[0].as_str(), num(&row[1]), num(&row[2]), num(&row[3]));
        let got = if let Some(i) = q.strip_prefix("root_re_") {
            rs.roots[i.parse::<usize>().unwrap()].re
        } else if let Some(i) = q.strip_prefix("root_im_") {
            rs.roots[i.parse::<usize>().unwrap()].im
        } else if let Some(l) = q.strip_prefix("weight_a_") {
            weight_a(&rs, l.parse().unwrap()).unwrap()
        } else if let Some(m) = q.strip_prefix("weight_b_") {
            weight_b(&rs, m.parse().unwrap(), p).unwrap()
        } else {
            match q {
                "kernel" => kernel(&rs, p).unwrap(),
                "yc_11" => yc(&rs, InitialConditions::new(1.0, 1.0), p).unwrap(),
                "yf_constant_1" | "laplace_step" => yf_constant(&rs, 1.0, p).unwrap(),
                "yf_sin_1_2.5" => yf_sinusoid(&rs, 1.0, 2.5, p).unwrap(),
                "yf_one_plus_sqrt" => yf_power(&rs, &[(1.0, 0.0), (1.0, 0.5)], p).unwrap(),
                other => panic!("unknown golden quantity {other}"),
            }
        };
        assert!((got - want).abs() <= tol, "{q}({p}): got {got}, want {want}");
    }
}
