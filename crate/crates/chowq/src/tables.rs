//! Full multiplication tables on the normal-form basis.

use std::fmt::Write;
use std::sync::Arc;

use chowq_core::{RingElement, RingError, RingPresentation};

pub struct TableEntry {
    pub left: usize,
    pub right: usize,
    pub product: RingElement,
}

/// Products `b_i * b_j` for `i <= j`, row by row.
pub fn multiplication_table(ring: &Arc<RingPresentation>, budget: u64) -> Result<Vec<TableEntry>, RingError> {
    let basis: Vec<RingElement> = (0..ring.basis().len()).map(|i| ring.basis_element(i)).collect();
    let mut out = Vec::with_capacity(basis.len() * (basis.len() + 1) / 2);
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let product = ring.ring_mul_with_budget(&basis[i], &basis[j], budget)?;
            out.push(TableEntry { left: i, right: j, product });
        }
    }
    Ok(out)
}

pub fn table_text(ring: &RingPresentation, entries: &[TableEntry]) -> String {
    let fiber = ring.fiber_table();
    let names: Vec<String> = ring.basis().iter().map(|m| m.text(fiber)).collect();
    let kind = ring.kind();
    let mut s = format!("{} n={}\nbasis: {}\n", kind.name(), kind.n(), names.join(", "));
    for e in entries {
        let _ = writeln!(s, "{} * {} = {}", names[e.left], names[e.right], e.product);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use chowq_core::ring::DEFAULT_STEP_BUDGET;
    use chowq_core::{make_ring, RingKind};

    #[test]
    fn smallest_even_table() {
        let ring = make_ring(RingKind::QuadricPointEven(2)).unwrap();
        let entries = multiplication_table(&ring, DEFAULT_STEP_BUDGET).unwrap();
        assert_eq!(entries.len(), 10);
        let text = table_text(&ring, &entries);
        assert!(text.contains("e * e = 0\n"), "{text}");
    }
}
