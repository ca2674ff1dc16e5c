use serde::{Deserialize, Serialize};

/// Limits on the exponential parts of the workbench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Maximum number of orthoclosed sets an enumeration may produce.
    pub family: usize,
    /// Maximum number of cliques a clique enumeration may produce.
    pub cliques: usize,
    /// Maximum number of nodes visited by one Sasaki-map search.
    pub search_nodes: usize,
    /// Largest orthoset the automorphism search accepts.
    pub automorphism_elements: usize,
    /// Largest lattice (element count) that may be built.
    pub lattice_elements: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            family: 1 << 16,
            cliques: 1 << 16,
            search_nodes: 10_000_000,
            automorphism_elements: 10,
            lattice_elements: 64,
        }
    }
}

impl Budgets {
    /// Environment variables read by [`Budgets::with_env`], paired with the
    /// field each one overrides.
    pub const ENV_VARS: [&'static str; 5] = [
        "ORTHOSET_FAMILY_BUDGET",
        "ORTHOSET_CLIQUE_BUDGET",
        "ORTHOSET_SEARCH_NODES",
        "ORTHOSET_AUTOMORPHISM_ELEMENTS",
        "ORTHOSET_LATTICE_ELEMENTS",
    ];

    /// Overrides fields from `ORTHOSET_*` environment variables.
    /// Unparseable or zero values are reported back as the offending name.
    pub fn with_env(mut self) -> Result<Self, String> {
        let fields: [&mut usize; 5] = [
            &mut self.family,
            &mut self.cliques,
            &mut self.search_nodes,
            &mut self.automorphism_elements,
            &mut self.lattice_elements,
        ];
        for (name, field) in Self::ENV_VARS.iter().zip(fields) {
            if let Ok(raw) = std::env::var(name) {
                match raw.trim().parse::<usize>() {
                    Ok(v) if v > 0 => *field = v,
                    _ => return Err(format!("{name}={raw}")),
                }
            }
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), String> {
        let all = [
            ("family", self.family),
            ("cliques", self.cliques),
            ("search_nodes", self.search_nodes),
            ("automorphism_elements", self.automorphism_elements),
            ("lattice_elements", self.lattice_elements),
        ];
        match all.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("budget `{name}` must be positive")),
            None => Ok(()),
        }
    }
}
