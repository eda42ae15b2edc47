use std::fmt;

use serde::{Deserialize, Serialize};

use super::table::{Elem, NaryTable};
use crate::error::{Error, Result};

const NAMES: [char; 4] = ['x', 'y', 'z', 'w'];

/// A term of the semigroup signature: a nonempty sequence of variable indices.
///
/// Evaluability against an `n`-ary table needs `len ≡ 1 (mod n-1)`, which is
/// checked at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct Word {
    num_vars: usize,
    letters: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    num_vars: usize,
    letters: Vec<usize>,
}

impl TryFrom<RawWord> for Word {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        Word::new(raw.num_vars, raw.letters)
    }
}

impl From<Word> for RawWord {
    fn from(w: Word) -> Self {
        RawWord {
            num_vars: w.num_vars,
            letters: w.letters,
        }
    }
}

impl Word {
    pub fn new(num_vars: usize, letters: Vec<usize>) -> Result<Self> {
        if num_vars == 0 || letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&letter) = letters.iter().find(|&&l| l >= num_vars) {
            return Err(Error::LetterOutOfRange { letter, num_vars });
        }
        Ok(Word { num_vars, letters })
    }

    /// `x^len` over a single variable.
    pub fn power(len: usize) -> Result<Self> {
        Word::new(1, vec![0; len])
    }

    /// Parses letters such as `"xxy"` or `"x y z"`; `x,y,z,w` name variables 0..4.
    pub fn parse(s: &str) -> Result<Self> {
        let letters: Vec<usize> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                NAMES
                    .iter()
                    .position(|&n| n == c)
                    .ok_or(Error::LetterOutOfRange {
                        letter: c as usize,
                        num_vars: NAMES.len(),
                    })
            })
            .collect::<Result<_>>()?;
        let num_vars = letters.iter().max().map_or(0, |m| m + 1);
        Word::new(num_vars, letters)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of occurrences of each variable.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vars];
        for &l in &self.letters {
            d[l] += 1;
        }
        d
    }

    pub fn is_evaluable(&self, arity: usize) -> bool {
        is_valid_length(self.len(), arity)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num_vars <= NAMES.len() {
            for &l in &self.letters {
                write!(f, "{}", NAMES[l])?;
            }
        } else {
            for (i, &l) in self.letters.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "x{l}")?;
            }
        }
        Ok(())
    }
}

/// Whether a product of `len` factors is defined for an `arity`-ary operation.
#[inline]
pub fn is_valid_length(len: usize, arity: usize) -> bool {
    len >= 1 && (len - 1).is_multiple_of(arity - 1)
}

pub(crate) fn check_length(len: usize, arity: usize) -> Result<()> {
    if is_valid_length(len, arity) {
        Ok(())
    } else {
        Err(Error::LengthNotEvaluable {
            length: len,
            arity,
        })
    }
}

/// Evaluates the product of `values` by left-greedy reduction.
pub fn eval_product(table: &NaryTable, values: impl IntoIterator<Item = Elem>) -> Result<Elem> {
    let n = table.arity();
    let mut iter = values.into_iter();
    let mut args = Vec::with_capacity(n);
    args.extend(iter.by_ref().take(n));
    let mut len = args.len();
    if len < n {
        return if len == 1 {
            Ok(args[0])
        } else {
            Err(Error::LengthNotEvaluable { length: len, arity: n })
        };
    }
    let mut acc = table.apply(&args);
    loop {
        args.clear();
        args.push(acc);
        args.extend(iter.by_ref().take(n - 1));
        match args.len() {
            1 => return Ok(acc),
            k if k == n => {
                len += n - 1;
                acc = table.apply(&args);
            }
            k => {
                return Err(Error::LengthNotEvaluable {
                    length: len + k - 1,
                    arity: n,
                })
            }
        }
    }
}

/// Evaluates `word` under `assignment` (one value per variable).
pub fn eval_word(table: &NaryTable, word: &Word, assignment: &[Elem]) -> Result<Elem> {
    if assignment.len() != word.num_vars {
        return Err(Error::AssignmentLength {
            expected: word.num_vars,
            actual: assignment.len(),
        });
    }
    if let Some(&element) = assignment.iter().find(|&&a| a >= table.size()) {
        return Err(Error::ElementOutOfRange {
            element,
            size: table.size(),
        });
    }
    check_length(word.len(), table.arity())?;
    Ok(eval_letters_unchecked(table, &word.letters, assignment))
}

/// Hot-path evaluation: caller guarantees a valid length and in-range assignment.
#[inline]
pub(crate) fn eval_letters_unchecked(table: &NaryTable, letters: &[usize], assignment: &[Elem]) -> Elem {
    let n = table.arity();
    if letters.len() == 1 {
        return assignment[letters[0]];
    }
    if n == 2 {
        let mut acc = assignment[letters[0]];
        for &l in &letters[1..] {
            acc = table.cell(acc * table.size() + assignment[l]);
        }
        return acc;
    }
    let m = table.size();
    let mut idx = letters[..n].iter().fold(0, |acc, &l| acc * m + assignment[l]);
    let mut acc = table.cell(idx);
    for chunk in letters[n..].chunks_exact(n - 1) {
        idx = chunk.iter().fold(acc, |acc, &l| acc * m + assignment[l]);
        acc = table.cell(idx);
    }
    acc
}
