//! Persistence bars with creator/destroyer attribution and representative
//! cycles.

use crate::complex::Filtration;
use crate::error::Result;

use super::chain::Chain;

/// One interval of the persistence module.
///
/// Values are filtration scales. The complexes are open (a simplex with
/// value v is present at scales r > v), so a class born by a positive-value
/// simplex does not yet exist at its birth value (open birth) and is still
/// alive at its death value (closed death). `death_open = true` on an
/// infinite bar records that no death scale is attained.
#[derive(Debug, Clone)]
pub struct Bar {
    pub dim: u8,
    pub birth: f64,
    pub death: Option<f64>,
    pub birth_open: bool,
    pub death_open: bool,
    /// Filtration position of the simplex whose arrival creates the class.
    pub creator: u32,
    /// Filtration position of the simplex whose arrival kills it.
    pub destroyer: Option<u32>,
    /// A cycle representing the class at any scale in the bar's interior.
    pub representative: Chain,
}

impl Bar {
    pub fn lifespan(&self) -> f64 {
        match self.death {
            Some(d) => d - self.birth,
            None => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }
}

/// The multiset of bars of a reduced filtration, dimensions 0 through
/// max_dim - 1.
#[derive(Debug, Clone)]
pub struct PersistenceDiagram {
    /// Field characteristic used for the reduction.
    pub p: u32,
    /// Dimension cap of the underlying filtration.
    pub max_dim: usize,
    pub bars: Vec<Bar>,
    /// Birth values of never-dying cycles in the truncation dimension
    /// itself. Not bars of the diagram, but needed to balance Euler
    /// characteristic bookkeeping at the cap.
    pub top_cycle_births: Vec<f64>,
}

impl PersistenceDiagram {
    /// Filtered view: bars of one dimension with birth inside the given
    /// closed range and lifespan at least `min_lifespan`, sorted by
    /// lifespan descending (infinite bars first).
    pub fn bars_in_window(
        &self,
        dim: usize,
        birth_range: (f64, f64),
        min_lifespan: f64,
    ) -> Vec<&Bar> {
        let mut out: Vec<&Bar> = self
            .bars
            .iter()
            .filter(|b| {
                b.dim as usize == dim
                    && b.birth >= birth_range.0
                    && b.birth <= birth_range.1
                    && b.lifespan() >= min_lifespan
            })
            .collect();
        out.sort_by(|a, b| b.lifespan().total_cmp(&a.lifespan()).then(a.birth.total_cmp(&b.birth)));
        out
    }

    /// Number of classes alive at scale r: born strictly before r and not
    /// yet destroyed (the destroyer, entering at its value, is absent at
    /// r <= death).
    pub fn betti(&self, dim: usize, r: f64) -> usize {
        self.bars
            .iter()
            .filter(|b| {
                b.dim as usize == dim && b.birth < r && b.death.map_or(true, |d| d >= r)
            })
            .count()
    }

    /// CSV export; infinity is encoded as an empty death field and vertex
    /// lists are space-separated.
    pub fn write_csv<W: std::io::Write>(&self, filtration: &Filtration, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "dim,birth,death,birth_open,death_open,creator_vertices,destroyer_vertices"
        )?;
        for bar in &self.bars {
            let creator = filtration.simplex(bar.creator as usize);
            let cv = join_vertices(creator.vertices());
            let dv = match bar.destroyer {
                Some(d) => join_vertices(filtration.simplex(d as usize).vertices()),
                None => String::new(),
            };
            let death = bar.death.map(|d| d.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                bar.dim, bar.birth, death, bar.birth_open, bar.death_open, cv, dv
            )?;
        }
        Ok(())
    }
}

fn join_vertices(verts: &[u32]) -> String {
    verts
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
