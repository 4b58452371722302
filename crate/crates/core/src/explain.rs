//! Step-by-step report for three-qubit states: every kernel constraint
//! system with the coefficients of `v` substituted, the resulting
//! dimensions, and the matching case of the three-qubit case analysis.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::document::TensorDocument;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::invariants::{signature, triple_constraint_matrix, InvariantSignature};
use crate::matrix::ExactMatrix;
use crate::tables::{classify, ClassLabel};
use crate::tensor::{FlatteningSpec, Shape, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintSystem {
    /// `K1`, `K12`, `K123`, ...
    pub name: String,
    pub equations: Vec<String>,
    pub unknowns: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeQubitReport {
    pub document: TensorDocument,
    pub systems: Vec<ConstraintSystem>,
    pub triple: ConstraintSystem,
    pub signature: InvariantSignature,
    pub case: String,
    pub label: ClassLabel,
}

/// Case of the three-qubit analysis a class belongs to. Case 2.3 has
/// `dim K1 = 1`; its cyclic images 2.3' and 2.3'' have `dim K2 = 1` and
/// `dim K3 = 1`.
pub fn three_qubit_case(sig: &InvariantSignature) -> Option<&'static str> {
    match (sig.singles.as_slice(), sig.triple?) {
        ([2, 2, 2], 8) => Some("1"),
        ([1, 1, 1], 4) => Some("2.2"),
        ([1, 0, 0], 3) => Some("2.3"),
        ([0, 1, 0], 3) => Some("2.3'"),
        ([0, 0, 1], 3) => Some("2.3''"),
        ([0, 0, 0], 1) => Some("3.1"),
        ([0, 0, 0], 0) => Some("3.2"),
        _ => None,
    }
}

fn digits(index: &[usize]) -> String {
    index.iter().map(|i| (i + 1).to_string()).collect()
}

fn coefficient<F: Field>(c: &F) -> String {
    let s = c.to_string();
    if s.char_indices().skip(1).any(|(_, ch)| ch == '+' || ch == '-') {
        format!("({s})")
    } else {
        s
    }
}

/// Renders `Σ c_i x_i = 0`, dropping zero terms.
fn equation<F: Field>(coeffs: &[F], names: &[String]) -> String {
    let ctx = match coeffs.first() {
        Some(c) => c.context(),
        None => return "0 = 0".into(),
    };
    let minus_one = -F::one_in(&ctx);
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            name.clone()
        } else if *c == minus_one {
            format!("-{name}")
        } else {
            format!("{}*{name}", coefficient(c))
        };
        match (out.is_empty(), term.strip_prefix('-')) {
            (true, _) => out.push_str(&term),
            (false, Some(rest)) => write!(out, " - {rest}").unwrap(),
            (false, None) => write!(out, " + {term}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out + " = 0"
}

fn sub_indices(shape: &Shape, factors: &[usize]) -> Vec<Vec<usize>> {
    let dims: Vec<usize> = factors.iter().map(|&f| shape.dim(f)).collect();
    let total: usize = dims.iter().product();
    (0..total)
        .map(|mut o| {
            let mut idx = vec![0; dims.len()];
            for (slot, &d) in idx.iter_mut().zip(&dims).rev() {
                *slot = o % d;
                o /= d;
            }
            idx
        })
        .collect()
}

fn system<F: Field>(v: &Tensor<F>, spec: &FlatteningSpec) -> Result<ConstraintSystem> {
    let m = v.flatten(spec)?;
    let shape = v.shape();
    let names: Vec<String> = sub_indices(shape, spec.row_factors()).iter().map(|i| format!("w{}", digits(i))).collect();
    let outer: Vec<String> = spec.col_factors().iter().map(|f| ["i", "j", "k"][*f].to_owned()).collect();
    let equations = sub_indices(shape, spec.col_factors())
        .iter()
        .enumerate()
        .map(|(c, idx)| {
            let label = format!(
                "({})=({})",
                outer.join(","),
                idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
            );
            format!("{label}: {}", equation(&m.column(c), &names))
        })
        .collect();
    let name = format!("K{}", spec.row_factors().iter().map(|f| (f + 1).to_string()).collect::<String>());
    let rank = m.rank()?;
    Ok(ConstraintSystem { name, equations, unknowns: m.rows(), rank, kernel_dim: m.rows() - rank })
}

fn triple_system<F: Field>(v: &Tensor<F>) -> Result<ConstraintSystem> {
    let m: ExactMatrix<F> = triple_constraint_matrix(v)?;
    let names: Vec<String> = v.shape().indices().map(|i| format!("w{}", digits(&i))).collect();
    let blocks = [("k,l", v.shape().dim(2)), ("j,l", v.shape().dim(1)), ("i,l", v.shape().dim(0))];
    let mut equations = Vec::with_capacity(m.rows());
    let mut row = 0;
    for (vars, d) in blocks {
        for a in 1..=d {
            for b in 1..=d {
                equations.push(format!("({vars})=({a},{b}): {}", equation(m.row(row), &names)));
                row += 1;
            }
        }
    }
    let rank = m.rank()?;
    Ok(ConstraintSystem { name: "K123".into(), equations, unknowns: m.cols(), rank, kernel_dim: m.cols() - rank })
}

pub fn explain_three_qubits<F: Field>(v: &Tensor<F>) -> Result<ThreeQubitReport> {
    match v.shape().dims() {
        [2, 2, 2] => {}
        [_, _, _] => return Err(Error::Shape(format!("explain3 needs shape (2,2,2), got {}", v.shape()))),
        dims => return Err(Error::Arity { expected: 3, got: dims.len() }),
    }
    let systems = FlatteningSpec::all(3).iter().map(|s| system(v, s)).collect::<Result<Vec<_>>>()?;
    let triple = triple_system(v)?;
    let sig = signature(v)?;
    let label = classify(v)?.label;
    let case = three_qubit_case(&sig)
        .ok_or_else(|| Error::Internal(format!("signature {sig} matches no three-qubit case")))?
        .to_owned();
    Ok(ThreeQubitReport { document: TensorDocument::from_tensor(v), systems, triple, signature: sig, case, label })
}

impl fmt::Display for ThreeQubitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "state: {}", self.document.to_json())?;
        for s in self.systems.iter().chain(std::iter::once(&self.triple)) {
            writeln!(f)?;
            writeln!(f, "{} ({} unknowns, {} equations):", s.name, s.unknowns, s.equations.len())?;
            for e in &s.equations {
                writeln!(f, "  {e}")?;
            }
            writeln!(f, "  rank {} => dim {} = {}", s.rank, s.name, s.kernel_dim)?;
        }
        writeln!(f)?;
        writeln!(f, "signature (k1,k2,k3;k12,k13,k23;k123) = {}", self.signature)?;
        writeln!(f, "case {}", self.case)?;
        writeln!(f, "class {}", self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::tensor::TermList;

    fn rep(terms: &str) -> Tensor<Rational> {
        let shape = Shape::new(&[2, 2, 2]).unwrap();
        Tensor::from_terms(shape, &terms.parse::<TermList>().unwrap(), None, &()).unwrap()
    }

    #[test]
    fn product_state() {
        let r = explain_three_qubits(&rep("[1,1,1]")).unwrap();
        assert_eq!(r.signature.to_string(), "(1,1,1;3,3,3;4)");
        assert_eq!((r.case.as_str(), r.label), ("2.2", ClassLabel(1)));
        assert_eq!(r.triple.equations.len(), 12);
        assert_eq!(r.systems.len(), 6);
        assert_eq!(r.systems[0].equations[0], "(j,k)=(1,1): w1 = 0");
    }

    #[test]
    fn zero_and_ghz() {
        let r = explain_three_qubits(&rep("0")).unwrap();
        assert_eq!(
            (r.signature.to_string().as_str(), r.case.as_str(), r.label),
            ("(2,2,2;4,4,4;8)", "1", ClassLabel(0))
        );
        assert!(r.triple.equations.iter().all(|e| e.ends_with(": 0 = 0")));
        let r = explain_three_qubits(&rep("[1,1,1]+[2,2,2]")).unwrap();
        assert_eq!(
            (r.signature.to_string().as_str(), r.case.as_str(), r.label),
            ("(0,0,0;2,2,2;0)", "3.2", ClassLabel(6))
        );
    }

    #[test]
    fn cyclic_cases() {
        assert_eq!(explain_three_qubits(&rep("[1,1,1]+[1,2,2]")).unwrap().case, "2.3");
        assert_eq!(explain_three_qubits(&rep("[1,1,1]+[2,1,2]")).unwrap().case, "2.3'");
        assert_eq!(explain_three_qubits(&rep("[1,1,1]+[2,2,1]")).unwrap().case, "2.3''");
        assert_eq!(explain_three_qubits(&rep("[1,1,1]+[1,2,2]+[2,1,2]")).unwrap().case, "3.1");
    }

    #[test]
    fn equation_rendering() {
        let q = |n: i64| Rational::from_integer(n.into());
        let names: Vec<String> = ["w1", "w2", "w3"].iter().map(|s| s.to_string()).collect();
        assert_eq!(equation(&[q(1), q(-1), q(3)], &names), "w1 - w2 + 3*w3 = 0");
        assert_eq!(equation(&[q(0), q(-2), q(0)], &names), "-2*w2 = 0");
    }

    #[test]
    fn rejects_other_shapes() {
        let v = Tensor::<Rational>::zeros(Shape::new(&[2, 2, 3]).unwrap(), &());
        assert!(matches!(explain_three_qubits(&v), Err(Error::Shape(_))));
        let v = Tensor::<Rational>::zeros(Shape::new(&[2, 2]).unwrap(), &());
        assert!(matches!(explain_three_qubits(&v), Err(Error::Arity { .. })));
    }
}
