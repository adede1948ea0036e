use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::{HornerProgram, MPoly, PolyError};
use crate::interval::{Interval, Precision};

/// A square polynomial system with its Jacobian and Hessians computed once,
/// symbolically, at construction.
pub struct PolySystem {
    vars: Vec<String>,
    names: Vec<String>,
    polys: Vec<MPoly>,
    jac: Vec<Vec<MPoly>>,
    hess: Vec<Vec<Vec<MPoly>>>,
    compiled: RwLock<HashMap<Precision, Arc<CompiledSystem>>>,
}

impl PolySystem {
    pub fn new(vars: Vec<String>, names: Vec<String>, polys: Vec<MPoly>) -> Result<Self, PolyError> {
        let m = vars.len();
        if polys.len() != m {
            return Err(PolyError::NonSquare {
                polys: polys.len(),
                vars: m,
            });
        }
        assert_eq!(names.len(), polys.len(), "one name per polynomial");
        assert!(polys.iter().all(|p| p.nvars() == m), "polynomials must be in the declared variables");

        let jac: Vec<Vec<MPoly>> = polys
            .iter()
            .map(|p| (0..m).map(|j| p.differentiate(j)).collect())
            .collect();
        let hess = jac
            .iter()
            .map(|row| {
                let mut h = vec![vec![MPoly::zero(m); m]; m];
                for j in 0..m {
                    for k in j..m {
                        let d = row[j].differentiate(k);
                        h[k][j] = d.clone();
                        h[j][k] = d;
                    }
                }
                h
            })
            .collect();

        Ok(PolySystem {
            vars,
            names,
            polys,
            jac,
            hess,
            compiled: RwLock::new(HashMap::new()),
        })
    }

    /// Builds a system with default names `x1..xm` and `f1..fm`.
    pub fn from_polys(polys: Vec<MPoly>) -> Result<Self, PolyError> {
        let m = polys.first().map_or(0, MPoly::nvars);
        let vars = (1..=m).map(|i| format!("x{i}")).collect();
        let names = (1..=polys.len()).map(|i| format!("f{i}")).collect();
        PolySystem::new(vars, names, polys)
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    /// `jacobian()[i][j]` is the derivative of `f_i` with respect to `x_j`.
    pub fn jacobian(&self) -> &[Vec<MPoly>] {
        &self.jac
    }

    /// `hessians()[i][j][k]` is the second derivative of `f_i` in `x_j, x_k`.
    pub fn hessians(&self) -> &[Vec<Vec<MPoly>>] {
        &self.hess
    }

    /// Horner programs at `prec`, built on first request and cached.
    pub fn compile(&self, prec: Precision) -> Arc<CompiledSystem> {
        if let Some(c) = self.compiled.read().expect("compile cache poisoned").get(&prec) {
            return Arc::clone(c);
        }
        let built = Arc::new(CompiledSystem::build(self, prec));
        let mut cache = self.compiled.write().expect("compile cache poisoned");
        Arc::clone(cache.entry(prec).or_insert(built))
    }

    /// The system in the file syntax accepted by [`super::parse_system`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!("vars {}\n", self.vars.join(" "));
        for (name, p) in self.names.iter().zip(&self.polys) {
            out.push_str(&format!("{name}: {}\n", p.to_expr_string(&self.vars)));
        }
        out
    }
}

impl PartialEq for PolySystem {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.names == other.names && self.polys == other.polys
    }
}

impl fmt::Debug for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolySystem")
            .field("vars", &self.vars)
            .field("names", &self.names)
            .field("polys", &self.polys)
            .finish()
    }
}

/// Horner programs for `F`, its Jacobian and its Hessians at one precision.
#[derive(Debug)]
pub struct CompiledSystem {
    prec: Precision,
    f: Vec<HornerProgram>,
    jac: Vec<Vec<HornerProgram>>,
    // Upper triangles only, row-major: entry (j, k) with j <= k.
    hess: Vec<Vec<HornerProgram>>,
}

impl CompiledSystem {
    fn build(sys: &PolySystem, prec: Precision) -> Self {
        let m = sys.dim();
        CompiledSystem {
            prec,
            f: sys.polys.iter().map(|p| HornerProgram::compile(p, prec)).collect(),
            jac: sys
                .jac
                .iter()
                .map(|row| row.iter().map(|p| HornerProgram::compile(p, prec)).collect())
                .collect(),
            hess: sys
                .hess
                .iter()
                .map(|h| {
                    (0..m)
                        .flat_map(|j| (j..m).map(move |k| (j, k)))
                        .map(|(j, k)| HornerProgram::compile(&h[j][k], prec))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn dim(&self) -> usize {
        self.f.len()
    }

    pub fn eval_component(&self, i: usize, x: &[Interval]) -> Interval {
        self.f[i].eval(x)
    }

    pub fn eval_f(&self, x: &[Interval]) -> Vec<Interval> {
        self.f.iter().map(|h| h.eval(x)).collect()
    }

    pub fn eval_jacobian(&self, x: &[Interval]) -> Vec<Vec<Interval>> {
        self.jac
            .iter()
            .map(|row| row.iter().map(|h| h.eval(x)).collect())
            .collect()
    }

    /// Hessian of `f_i`; mirrored entries are evaluated once.
    pub fn eval_hessian(&self, i: usize, x: &[Interval]) -> Vec<Vec<Interval>> {
        let m = self.dim();
        let mut out = vec![vec![Interval::zero(self.prec); m]; m];
        let mut it = self.hess[i].iter();
        for j in 0..m {
            for k in j..m {
                let v = it.next().expect("upper triangle entry").eval(x);
                out[k][j] = v.clone();
                out[j][k] = v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    #[test]
    fn compile_is_cached() {
        let s = parse_system("vars x\np: x^2 - 2").unwrap();
        let a = s.compile(Precision::DOUBLE);
        let b = s.compile(Precision::DOUBLE);
        assert!(Arc::ptr_eq(&a, &b));
        let c = s.compile(Precision::new(106).unwrap());
        assert!(!Arc::ptr_eq(&a, &c));
        assert_eq!(c.precision().bits(), 106);
    }

    #[test]
    fn concurrent_compile_agrees() {
        let s = Arc::new(parse_system("vars x y\np: x^2+y^2-1\nq: x - y").unwrap());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let s = Arc::clone(&s);
                std::thread::spawn(move || s.compile(Precision::new(113).unwrap()))
            })
            .collect();
        let all: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        let cached = s.compile(Precision::new(113).unwrap());
        assert!(all.iter().any(|c| Arc::ptr_eq(c, &cached)));
    }

    #[test]
    fn hessian_is_symmetric_and_evaluated() {
        let s = parse_system("vars x y\np: x^3*y + 2*x*y^2\nq: x - y").unwrap();
        let h = &s.hessians()[0];
        assert_eq!(h[0][1], h[1][0]);
        let cs = s.compile(Precision::DOUBLE);
        let pt = [Interval::from_f64(1.0, 1.0), Interval::from_f64(2.0, 2.0)];
        let hv = cs.eval_hessian(0, &pt);
        // d2/dx2 = 6xy, d2/dxdy = 3x^2 + 4y, d2/dy2 = 4x
        assert_eq!(hv[0][0].to_f64_bounds(), (12.0, 12.0));
        assert_eq!(hv[0][1].to_f64_bounds(), (11.0, 11.0));
        assert_eq!(hv[1][0].to_f64_bounds(), (11.0, 11.0));
        assert_eq!(hv[1][1].to_f64_bounds(), (4.0, 4.0));
    }

    #[test]
    fn file_string_round_trips() {
        let text = "vars x y\np: (x - 3)^4*y - 5*y^3 + 7\nq: -x*y + 2^70\n";
        let s = parse_system(text).unwrap();
        let again = parse_system(&s.to_file_string()).unwrap();
        assert_eq!(s, again);
    }
}
