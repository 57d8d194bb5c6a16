use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{Embedding, Matrix, QuadElem, ScalarWire};
use crate::forms::{orthogonal_sum, DiagonalForm};

use super::TwistError;

/// A block `(q, A, d)` with, when valid, `q∘A = d·q` and `A² = d·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistBlock {
    pub q: DiagonalForm,
    pub a: Matrix<QuadElem>,
    pub d: QuadElem,
}

pub(crate) fn matrix_wire(m: &Matrix<QuadElem>) -> Vec<Vec<ScalarWire>> {
    m.to_rows().iter().map(|r| r.iter().map(ScalarWire::from_elem).collect()).collect()
}

impl Serialize for TwistBlock {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TwistBlock", 3)?;
        st.serialize_field("q", &self.q.entries().iter().map(ScalarWire::from_elem).collect::<Vec<_>>())?;
        st.serialize_field("matrix", &matrix_wire(&self.a))?;
        st.serialize_field("d", &ScalarWire::from_elem(&self.d))?;
        st.end()
    }
}

impl TwistBlock {
    pub fn check(&self) -> Result<BlockCheck, TwistError> {
        verify_block(&self.q, &self.a, &self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    /// `q∘A = d·q`
    pub similitude: bool,
    /// `A² = d·I`
    pub square: bool,
}

impl BlockCheck {
    pub fn passed(&self) -> bool {
        self.similitude && self.square
    }
}

pub(crate) fn coerce_matrix(m: &Matrix<QuadElem>, q: &DiagonalForm) -> Result<Matrix<QuadElem>, TwistError> {
    let k = q.field();
    let rows = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|e| e.in_field(k)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| TwistError::WrongField(k))?;
    Ok(Matrix::from_rows(rows).expect("same shape"))
}

/// Exact check of both block identities.
pub fn verify_block(q: &DiagonalForm, a: &Matrix<QuadElem>, d: &QuadElem) -> Result<BlockCheck, TwistError> {
    let n = q.rank();
    if a.rows() != n || a.cols() != n {
        return Err(TwistError::Shape { rank: n, rows: a.rows(), cols: a.cols() });
    }
    let a = coerce_matrix(a, q)?;
    let d = d.in_field(q.field()).map_err(|_| TwistError::WrongField(q.field()))?;
    let similitude = q.compose(&a) == q.gram().scale(&d);
    let square = a.mul(&a) == Matrix::<QuadElem>::identity(n).scale(&d);
    Ok(BlockCheck { similitude, square })
}

/// Block-diagonal assembly `f₀ = ⊥ qᵢ`, `A₀ = diag(Aᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub f0: DiagonalForm,
    pub a0: Matrix<QuadElem>,
    pub d: QuadElem,
    /// Rank below 4, outside the dimensions the twist construction targets.
    pub below_scope: bool,
}

pub fn assemble(blocks: &[TwistBlock]) -> Result<Assembly, TwistError> {
    let first = blocks.first().ok_or(TwistError::NoBlocks)?;
    let mut f0 = first.q.clone();
    for b in &blocks[1..] {
        if b.d != first.d {
            return Err(TwistError::MismatchedD(first.d.to_string(), b.d.to_string()));
        }
        f0 = orthogonal_sum(&f0, &b.q)?;
    }
    let negatives = f0.signature(Embedding::Identity)?.1;
    if negatives != 1 {
        return Err(TwistError::NegativeDirections(negatives));
    }
    let mats: Vec<Matrix<QuadElem>> = blocks.iter().map(|b| coerce_matrix(&b.a, &b.q)).collect::<Result<_, _>>()?;
    let a0 = Matrix::block_diagonal(&mats);
    let below_scope = f0.rank() < 4;
    Ok(Assembly { f0, a0, d: first.d.clone(), below_scope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;

    fn q(v: &[i64]) -> DiagonalForm {
        DiagonalForm::from_ints(Field::Rationals, v).unwrap()
    }

    fn block(qv: &[i64], a: &[&[i64]], d: i64) -> TwistBlock {
        TwistBlock { q: q(qv), a: Matrix::from_ints(a), d: QuadElem::int(d) }
    }

    #[test]
    fn verify_block_examples() {
        assert!(block(&[-1, 1], &[&[2, 1], &[-1, -2]], 3).check().unwrap().passed());
        assert!(block(&[3, 1], &[&[0, 1], &[3, 0]], 3).check().unwrap().passed());
        let c = block(&[1, 1], &[&[1, 0], &[0, 1]], 2).check().unwrap();
        assert_eq!(c, BlockCheck { similitude: false, square: false });
        let bad = verify_block(&q(&[1, 1, 1]), &Matrix::from_ints(&[&[1, 0], &[0, 1]]), &QuadElem::int(2));
        assert!(matches!(bad, Err(TwistError::Shape { .. })));
    }

    #[test]
    fn assemble_examples() {
        let b1 = block(&[-1, 1], &[&[2, 1], &[-1, -2]], 3);
        let b2 = block(&[3, 1], &[&[0, 1], &[3, 0]], 3);
        let asm = assemble(&[b1.clone(), b2.clone()]).unwrap();
        assert_eq!(asm.f0, q(&[-1, 1, 3, 1]));
        assert!(!asm.below_scope);
        assert_eq!(asm.a0.get(2, 3), &QuadElem::int(1));

        let single = assemble(std::slice::from_ref(&b1)).unwrap();
        assert!(single.below_scope);

        let b5 = block(&[5, 1], &[&[0, 1], &[5, 0]], 5);
        assert!(matches!(assemble(&[b1.clone(), b5]), Err(TwistError::MismatchedD(..))));
        assert_eq!(assemble(&[b2.clone(), b2]), Err(TwistError::NegativeDirections(0)));
        assert_eq!(assemble(&[b1.clone(), b1]), Err(TwistError::NegativeDirections(2)));
        assert_eq!(assemble(&[]), Err(TwistError::NoBlocks));
    }

    #[test]
    fn serializes_with_exact_strings() {
        let b = block(&[-1, 1], &[&[2, 1], &[-1, -2]], 3);
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"q":["-1","1"],"matrix":[["2","1"],["-1","-2"]],"d":"3"}"#);
    }
}
