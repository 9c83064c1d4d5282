use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::Algebra;
use crate::linalg::Subgroup;
use crate::report::CheckReport;

/// Per-algebra data that theorem checks consult repeatedly.
#[derive(Clone, Debug)]
pub struct AlgebraFacts {
    pub azumaya: CheckReport,
    pub constant_rank: (bool, usize),
    pub center: Subgroup,
    pub base_reduced: bool,
}

impl AlgebraFacts {
    pub fn compute(a: &Algebra) -> Self {
        Self {
            azumaya: a.is_azumaya(),
            constant_rank: a.has_constant_rank(),
            center: a.center(),
            base_reduced: a.base().is_reduced(),
        }
    }

    pub fn is_azumaya(&self) -> bool {
        self.azumaya.passed()
    }
}

/// Memo of [`AlgebraFacts`], keyed on structure constants. Safe to share
/// across threads; a racing miss computes the facts twice.
#[derive(Default)]
pub struct FactCache {
    map: Mutex<HashMap<Arc<Algebra>, Arc<AlgebraFacts>>>,
}

impl FactCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &Arc<Algebra>) -> Arc<AlgebraFacts> {
        if let Some(f) = self.map.lock().unwrap().get(a) {
            return f.clone();
        }
        let facts = Arc::new(AlgebraFacts::compute(a));
        self.map
            .lock()
            .unwrap()
            .entry(a.clone())
            .or_insert(facts)
            .clone()
    }
}
