//! Parsing of set specs, numbers, complex points and windows given on the command line.

use fraczeta::geometry::{
    a_string_set, cantor_set, carpet, cell_boundary, flat_drum, fractal_nest, string_set, FractalString, SetDescriptor,
};
use fraczeta::quasi::two_qp_set;
use fraczeta::spectrum::Window;
use num_complex::Complex64;

/// Help text listing the accepted set specs.
pub const SET_HELP: &str = "\
Set spec. One of:
  cantor            C^(2,1/3)
  cantor:M,A        generalized Cantor set C^(M,A), A < 1/M
  carpet2, carpet3  Sierpinski carpet in the unit square or cube
  boundary:N        boundary of the unit N-cell
  astring:A[,J]     a-string {j^-A}, infinite or with J lengths
  nest:A[,K]        circles of radii k^-A in the unit disk
  flat              the flat drum {0 < y < exp(-1/x)}
  string:L*M,...    lengths L with multiplicities M
  qp:M1,M2,D        Cantor sets of dimension D on [0,1] and [1,2]
Numbers accept fractions such as 1/3.";

/// A real number, also written as a fraction `p/q`.
pub fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}"));
    let v = match s.split_once('/') {
        Some((p, q)) => parse(p)? / parse(q)?,
        None => parse(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

fn integer<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("not a nonnegative integer: {s:?}"))
}

/// `re` or `re,im`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(s)?, 0.0)),
    }
}

/// `sigma_left:sigma_right:tau_max`.
pub fn window(s: &str) -> Result<Window, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [l, r, tau] = parts[..] else {
        return Err(format!("window must be sigma_left:sigma_right:tau_max, got {s:?}"));
    };
    Window::new(number(l)?, number(r)?, number(tau)?).map_err(|e| e.to_string())
}

/// `t_min:t_max` or `t_min:t_max:per_decade`.
pub fn grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts[..] {
        [a, b] => Ok((number(a)?, number(b)?, fraczeta::dims::POINTS_PER_DECADE)),
        [a, b, n] => Ok((number(a)?, number(b)?, integer(n)?)),
        _ => Err(format!("grid must be t_min:t_max[:per_decade], got {s:?}")),
    }
}

fn args(rest: &str, min: usize, max: usize, kind: &str) -> Result<Vec<String>, String> {
    let list: Vec<String> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',').map(str::to_owned).collect()
    };
    if list.len() < min || list.len() > max {
        return Err(format!("{kind} takes {min} to {max} parameters, got {}", list.len()));
    }
    Ok(list)
}

/// Builds the catalog set named by `spec`.
pub fn set(spec: &str) -> Result<SetDescriptor, String> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let lib = |r: fraczeta::Result<SetDescriptor>| r.map_err(|e| e.to_string());
    match kind.trim() {
        "cantor" if rest.is_empty() => lib(cantor_set(2, 1.0 / 3.0)),
        "cantor" => {
            let a = args(rest, 2, 2, "cantor")?;
            lib(cantor_set(integer(&a[0])?, number(&a[1])?))
        }
        "carpet2" => lib(carpet(2)),
        "carpet3" => lib(carpet(3)),
        "carpet" => lib(carpet(integer(rest)?)),
        "boundary" => lib(cell_boundary(integer(rest)?, 1.0)),
        "astring" => {
            let a = args(rest, 1, 2, "astring")?;
            let terms = a.get(1).map(|j| integer(j)).transpose()?;
            lib(a_string_set(number(&a[0])?, terms))
        }
        "nest" => {
            let a = args(rest, 1, 2, "nest")?;
            let rings = a.get(1).map(|k| integer(k)).transpose()?;
            lib(fractal_nest(number(&a[0])?, rings))
        }
        "flat" if rest.is_empty() => Ok(flat_drum()),
        "string" => {
            let mut entries = Vec::new();
            for item in args(rest, 1, usize::MAX, "string")? {
                let (len, mult) = item.split_once('*').unwrap_or((&item, "1"));
                entries.push((number(len)?, integer(mult)?));
            }
            lib(FractalString::new(entries).map(string_set))
        }
        "qp" => {
            let a = args(rest, 3, 3, "qp")?;
            let report = two_qp_set(integer(&a[0])?, integer(&a[1])?, number(&a[2])?, 0.0);
            report.map(|r| r.set).map_err(|e| e.to_string())
        }
        _ => Err(format!("unknown set spec {spec:?}\n{SET_HELP}")),
    }
}

/// Comma-separated numbers.
pub fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(number).collect()
}

/// Comma-separated integers.
pub fn integers(s: &str) -> Result<Vec<u64>, String> {
    s.split(',').map(integer).collect()
}
