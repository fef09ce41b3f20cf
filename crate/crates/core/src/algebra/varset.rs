use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of series variables together with the truncation order, the
/// maximal total degree kept by every series built over it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSet {
    names: Vec<String>,
    order: u32,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, order: u32) -> Result<Arc<VarSet>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || !seen.insert(n.as_str()) {
                return Err(Error::Domain(format!("invalid or repeated variable name `{n}`")));
            }
        }
        Ok(Arc::new(VarSet { names, order }))
    }

    /// `t, tw1..tw{dw}, tb1..tb{db}`.
    pub fn hypermap(dw: usize, db: usize, order: u32) -> Arc<VarSet> {
        let names = std::iter::once("t".to_string())
            .chain((1..=dw).map(|d| format!("tw{d}")))
            .chain((1..=db).map(|d| format!("tb{d}")));
        VarSet::new(names, order).expect("hypermap names are distinct")
    }

    /// `p-1, p0, .., p{d}`: generic step weights of a skip-free walk.
    pub fn walk_weights(d: usize, order: u32) -> Arc<VarSet> {
        let names = (-1..=d as i64).map(|j| format!("p{j}"));
        VarSet::new(names, order).expect("walk weight names are distinct")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_order(&self, order: u32) -> Arc<VarSet> {
        Arc::new(VarSet { names: self.names.clone(), order })
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[[{}]]/deg>{}", self.names.join(","), self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypermap_names() {
        let v = VarSet::hypermap(2, 1, 3);
        assert_eq!(v.names(), ["t", "tw1", "tw2", "tb1"]);
        assert_eq!(v.index_of("tw2"), Some(2));
        assert_eq!(v.order(), 3);
    }

    #[test]
    fn rejects_duplicates() {
        assert!(VarSet::new(["t", "t"], 1).is_err());
    }

    #[test]
    fn walk_names() {
        let v = VarSet::walk_weights(2, 4);
        assert_eq!(v.names(), ["p-1", "p0", "p1", "p2"]);
    }
}
