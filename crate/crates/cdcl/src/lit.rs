use std::fmt;
use std::ops::Not;

/// A propositional variable, numbered from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub(crate) u32);

impl Var {
    pub fn new(index: usize) -> Var {
        Var(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit(self.0 << 1)
    }

    pub fn negative(self) -> Lit {
        Lit((self.0 << 1) | 1)
    }

    /// Literal of this variable with the given polarity (`true` = positive).
    pub fn lit(self, value: bool) -> Lit {
        if value {
            self.positive()
        } else {
            self.negative()
        }
    }
}

/// A literal: a variable together with a sign. Encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(pub(crate) u32);

impl Lit {
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_positive(self) -> bool {
        !self.is_negative()
    }

    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    /// Converts a nonzero DIMACS integer (`3`, `-7`) into a literal.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "zero is not a DIMACS literal");
        let var = Var(value.unsigned_abs() - 1);
        var.lit(value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32 + 1;
        if self.is_negative() {
            -v
        } else {
            v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LBool {
    True,
    False,
    Undef,
}

impl LBool {
    pub(crate) fn from_bool(b: bool) -> LBool {
        if b {
            LBool::True
        } else {
            LBool::False
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_conversion() {
        let l = Lit::from_dimacs(-5);
        assert_eq!(l.var(), Var(4));
        assert!(l.is_negative());
        assert_eq!(l.to_dimacs(), -5);
        assert_eq!((!l).to_dimacs(), 5);
        assert_eq!(Var(0).positive().to_dimacs(), 1);
    }
}
