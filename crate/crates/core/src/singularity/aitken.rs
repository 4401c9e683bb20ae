use crate::error::{Error, Result};
use crate::scalar::{relative_threshold, Field};

#[derive(Debug, Clone, PartialEq)]
pub struct AitkenOutcome<T> {
    pub values: Vec<T>,
    pub passes_completed: usize,
    /// A pass hit a vanishing second difference; `values` is the sequence
    /// from before that pass.
    pub stopped_early: bool,
}

impl<T> AitkenOutcome<T> {
    /// Most extrapolated element.
    pub fn last(&self) -> &T {
        self.values.last().expect("Aitken output is never empty")
    }
}

/// Repeated Δ²: `x_n ← x_{n+2} - (x_{n+2} - x_{n+1})² / (x_{n+2} - 2x_{n+1} + x_n)`.
///
/// Each pass shortens the sequence by two.
pub fn aitken<T: Field>(sequence: &[T], passes: usize) -> Result<AitkenOutcome<T>> {
    if passes == 0 {
        return Err(Error::InvalidArgument("aitken needs at least one pass".into()));
    }
    if sequence.len() < 2 * passes + 1 {
        return Err(Error::InvalidArgument(format!(
            "{passes} Aitken passes need at least {} terms, got {}",
            2 * passes + 1,
            sequence.len()
        )));
    }
    let ctx = sequence[0].context();
    let tolerance = relative_threshold::<T>(&ctx, 5);
    let two = T::from_i64(2, &ctx);

    let mut current = sequence.to_vec();
    for pass in 0..passes {
        let mut next = Vec::with_capacity(current.len() - 2);
        for w in current.windows(3) {
            let (x0, x1, x2) = (&w[0], &w[1], &w[2]);
            let second = x2.clone() - two.clone() * x1.clone() + x0.clone();
            if second.is_zero() || second.abs() <= tolerance.clone() * x0.abs() {
                return Ok(AitkenOutcome {
                    values: current,
                    passes_completed: pass,
                    stopped_early: true,
                });
            }
            let first = x2.clone() - x1.clone();
            next.push(x2.clone() - first.clone() * first / second);
        }
        current = next;
    }
    Ok(AitkenOutcome {
        values: current,
        passes_completed: passes,
        stopped_early: false,
    })
}
