use std::cmp::Ordering;
use std::fmt;

/// A generator `z_j` or its adjoint `z_j*`. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub starred: bool,
}

impl Letter {
    pub const fn z(index: usize) -> Self {
        Letter { index, starred: false }
    }

    pub const fn z_star(index: usize) -> Self {
        Letter { index, starred: true }
    }

    pub fn adjoint(self) -> Self {
        Letter { index: self.index, starred: !self.starred }
    }
}

impl Ord for Letter {
    /// Unstarred letters sort before starred ones, then by index.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.starred, self.index).cmp(&(other.starred, other.index))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.index)?;
        if self.starred {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// An element of the free monoid on the letters. The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reverses the word and toggles every star.
    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    pub fn has_star(&self) -> bool {
        self.0.iter().any(|l| l.starred)
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.index).max().unwrap_or(0)
    }
}

impl Ord for Word {
    /// Graded order: shorter words first, then lexicographic on letters.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Runs of a repeated letter are written as powers: `z1^2*z2'`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{l}")?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}
