use super::Pattern;
use crate::bits::BitVec;
use crate::dataset::{Dataset, Label};

/// The `W` matrix, stored one packed column per pattern so that error
/// counting over a pattern set is a popcount over a running union.
#[derive(Clone, Debug)]
pub struct CoverageMatrix {
    /// `columns[k]` has bit `n` set iff example `n` satisfies pattern `k`.
    pub columns: Vec<BitVec>,
    pub lengths: Vec<usize>,
    pub labels: Vec<Label>,
}

impl CoverageMatrix {
    pub fn from_columns(columns: Vec<BitVec>, lengths: Vec<usize>, labels: Vec<Label>) -> Self {
        assert_eq!(columns.len(), lengths.len());
        assert!(columns.iter().all(|c| c.len() == labels.len()));
        CoverageMatrix {
            columns,
            lengths,
            labels,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_patterns(&self) -> usize {
        self.columns.len()
    }

    /// Whether pattern `k` covers row `n`.
    pub fn get(&self, n: usize, k: usize) -> bool {
        self.columns[k].get(n)
    }

    pub fn n_positive(&self) -> usize {
        self.labels.iter().filter(|l| l.is_positive()).count()
    }
}

pub fn pattern_coverage(z: &Pattern, d: &Dataset) -> BitVec {
    BitVec::from_fn(d.len(), |n| z.satisfies(d.row(n)))
}

pub fn coverage_matrix(patterns: &[Pattern], d: &Dataset) -> CoverageMatrix {
    CoverageMatrix {
        columns: patterns.iter().map(|z| pattern_coverage(z, d)).collect(),
        lengths: patterns.iter().map(Pattern::len).collect(),
        labels: d.labels().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Literal;
    use crate::test_fixtures::fixture;

    #[test]
    fn fixture_matrix() {
        let d = fixture();
        let ps = vec![
            Pattern::new([Literal::category(0, 0)]).unwrap(),
            Pattern::new([Literal::numeric(1, None, Some(2.0))]).unwrap(),
        ];
        let w = coverage_matrix(&ps, &d);
        let rows: Vec<(bool, bool)> = (0..4).map(|n| (w.get(n, 0), w.get(n, 1))).collect();
        assert_eq!(
            rows,
            vec![(true, true), (true, false), (false, true), (false, false)]
        );
        assert_eq!(w.lengths, vec![1, 1]);
    }

    #[test]
    fn empty_and_duplicate_columns() {
        let d = fixture();
        let w = coverage_matrix(&[], &d);
        assert_eq!((w.n_rows(), w.n_patterns()), (4, 0));
        let p = Pattern::new([Literal::category(0, 1)]).unwrap();
        let w = coverage_matrix(&[p.clone(), p], &d);
        assert_eq!(w.columns[0], w.columns[1]);
    }
}
