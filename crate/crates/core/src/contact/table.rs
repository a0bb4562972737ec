use std::fmt;

use rayon::prelude::*;

use super::pair::JacobiPair;
use crate::algebra::RatExpr;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: RatExpr,
}

/// Brackets of labelled functions, one entry per unordered pair (`i < j`).
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTable {
    pub entries: Vec<BracketEntry>,
}

impl BracketTable {
    pub fn compute(pair: &JacobiPair, functions: &[(String, RatExpr)]) -> Result<BracketTable> {
        let n = functions.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let entries: Result<Vec<BracketEntry>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                Ok(BracketEntry {
                    left: functions[i].0.clone(),
                    right: functions[j].0.clone(),
                    value: pair.bracket(&functions[i].1, &functions[j].1)?,
                })
            })
            .collect();
        Ok(BracketTable { entries: entries? })
    }

    /// `[left, right]`, using antisymmetry for reversed lookups.
    pub fn get(&self, left: &str, right: &str) -> Option<RatExpr> {
        self.entries.iter().find_map(|e| {
            if e.left == left && e.right == right {
                Some(e.value.clone())
            } else if e.left == right && e.right == left {
                Some(-&e.value)
            } else {
                None
            }
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for BracketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "[{}, {}] = {}", e.left, e.right, e.value)?;
        }
        Ok(())
    }
}
