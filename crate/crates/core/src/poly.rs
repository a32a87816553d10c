use crate::C64;

/// Polynomial stored by its leading coefficient and roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootPoly {
    pub lead: C64,
    pub roots: Vec<C64>,
}

impl RootPoly {
    pub fn one() -> Self {
        RootPoly {
            lead: C64::new(1.0, 0.0),
            roots: vec![],
        }
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn is_one(&self) -> bool {
        self.roots.is_empty() && self.lead == C64::new(1.0, 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.roots.iter().fold(self.lead, |acc, r| acc * (z - r))
    }

    /// Multiplicity of `z` as a root.
    pub fn order_at(&self, z: C64) -> usize {
        self.roots
            .iter()
            .filter(|r| (**r - z).norm() < crate::tol::COINCIDENT)
            .count()
    }

    /// Taylor coefficients `P^{(l)}(z)/l!` for `l = 0..=max_order`.
    pub fn taylor(&self, z: C64, max_order: usize) -> Vec<C64> {
        let mut c = vec![C64::new(0.0, 0.0); max_order + 1];
        c[0] = self.lead;
        let mut len = 1;
        for r in &self.roots {
            // multiply by (z − r) + h
            let a = z - r;
            let top = len.min(max_order);
            for l in (0..=top).rev() {
                let prev = if l > 0 { c[l - 1] } else { C64::new(0.0, 0.0) };
                let cur = if l < len { c[l] } else { C64::new(0.0, 0.0) };
                c[l] = cur * a + prev;
            }
            len = (len + 1).min(max_order + 1);
        }
        c
    }
}
