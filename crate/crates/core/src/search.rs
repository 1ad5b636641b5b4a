//! Depth-first enumeration of value vectors in lexicographic order, with a
//! consistency test applied each time a position is filled.

pub(crate) trait Constraints {
    /// Number of positions.
    fn len(&self) -> usize;
    /// Values per position, tried in order `0..choices`.
    fn choices(&self) -> u8;
    /// Whether `partial` is consistent, given that `partial[..len - 1]` was.
    fn consistent(&self, partial: &[u8]) -> bool;
}

pub(crate) struct Backtrack<C> {
    constraints: C,
    values: Vec<u8>,
    fixed: usize,
    started: bool,
    done: bool,
}

impl<C: Constraints> Backtrack<C> {
    /// Enumerates completions of `prefix` only.
    pub(crate) fn new(constraints: C, prefix: Vec<u8>) -> Self {
        let fixed = prefix.len();
        Backtrack { constraints, values: prefix, fixed, started: false, done: false }
    }

    pub(crate) fn constraints(&self) -> &C {
        &self.constraints
    }

    fn prefix_consistent(&self) -> bool {
        self.values.len() <= self.constraints.len()
            && (1..=self.values.len()).all(|k| self.constraints.consistent(&self.values[..k]))
    }

    /// Moves to the next consistent sibling of the deepest free position,
    /// popping exhausted positions.
    fn bump(&mut self) -> bool {
        let choices = self.constraints.choices();
        while self.values.len() > self.fixed {
            let last = self.values.len() - 1;
            if self.values[last] + 1 < choices {
                self.values[last] += 1;
                if self.constraints.consistent(&self.values) {
                    return true;
                }
            } else {
                self.values.pop();
            }
        }
        false
    }

    fn extend(&mut self) -> bool {
        while self.values.len() < self.constraints.len() {
            self.values.push(0);
            if !self.constraints.consistent(&self.values) && !self.bump() {
                return false;
            }
        }
        true
    }
}

impl<C: Constraints> Iterator for Backtrack<C> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let found = if self.started {
            self.bump() && self.extend()
        } else {
            self.started = true;
            self.prefix_consistent() && self.extend()
        };
        if found {
            Some(self.values.clone())
        } else {
            self.done = true;
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Binary strings with no two adjacent ones.
    struct NoAdjacentOnes(usize);

    impl Constraints for NoAdjacentOnes {
        fn len(&self) -> usize {
            self.0
        }
        fn choices(&self) -> u8 {
            2
        }
        fn consistent(&self, p: &[u8]) -> bool {
            p.len() < 2 || !(p[p.len() - 1] == 1 && p[p.len() - 2] == 1)
        }
    }

    #[test]
    fn fibonacci_counts() {
        let counts: Vec<usize> = (0..8).map(|n| Backtrack::new(NoAdjacentOnes(n), vec![]).count()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 8, 13, 21, 34]);
    }

    #[test]
    fn lexicographic_and_prefixed() {
        let all: Vec<Vec<u8>> = Backtrack::new(NoAdjacentOnes(3), vec![]).collect();
        assert_eq!(all, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 1]]);
        let tail: Vec<Vec<u8>> = Backtrack::new(NoAdjacentOnes(3), vec![1]).collect();
        assert_eq!(tail, vec![vec![1, 0, 0], vec![1, 0, 1]]);
        assert_eq!(Backtrack::new(NoAdjacentOnes(3), vec![1, 1]).count(), 0);
        assert_eq!(Backtrack::new(NoAdjacentOnes(2), vec![0, 1]).count(), 1);
        assert_eq!(Backtrack::new(NoAdjacentOnes(2), vec![0, 1, 0]).count(), 0);
    }
}
