use crate::femspace::{assemble_reaction, Field, TriMesh};

/// Dense record of all past levels `u^0..u^{n−1}` and their reaction load
/// vectors `R^j = ∫ u^j (1 − u^j) φ_i`.
#[derive(Debug, Clone, Default)]
pub struct History {
    fields: Vec<Field>,
    reactions: Vec<Vec<f64>>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, u: Field, reaction: Vec<f64>) {
        debug_assert_eq!(u.len(), reaction.len());
        self.fields.push(u);
        self.reactions.push(reaction);
    }

    /// Number of stored levels (the next step index).
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn field(&self, j: usize) -> &Field {
        &self.fields[j]
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn reaction(&self, j: usize) -> &[f64] {
        &self.reactions[j]
    }

    pub fn last(&self) -> Option<&Field> {
        self.fields.last()
    }

    /// Max-norm gap between the cached `R^j` and a fresh assembly.
    pub fn reaction_cache_error(&self, mesh: &TriMesh, j: usize) -> f64 {
        let fresh =
            assemble_reaction(mesh, &self.fields[j]).expect("history fields match the mesh");
        fresh
            .iter()
            .zip(&self.reactions[j])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn into_fields(self) -> Vec<Field> {
        self.fields
    }
}
