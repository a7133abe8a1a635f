use serde::{Deserialize, Serialize};

/// JSON description of a coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RingSpec {
    Zmod {
        n: usize,
    },
    Gf {
        p: u64,
        #[serde(default = "one")]
        k: u32,
        /// Monic modulus, coefficients from the constant term upwards.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        poly: Option<Vec<u64>>,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    Table {
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
    },
    Poly {
        base: FieldSpec,
        vars: Vec<String>,
    },
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Q,
    Gf { p: u64 },
}
