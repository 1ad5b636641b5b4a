//! Cooriented branched-surface complexes whose exterior is a union of product
//! balls, described combinatorially: sectors with Euler characteristic and
//! double-corner count, and the complementary regions on either side.

use crate::homology::{to_big, ChainComplex, HomologyClass, HomologyError};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchedError {
    #[error("inconsistent corner data: sector {sector} has an odd double-corner count {dc}")]
    InconsistentCorners { sector: usize, dc: u64 },
    #[error("sector {sector} refers to region {region}, but there are only {count} regions")]
    RegionOutOfRange { sector: usize, region: usize, count: usize },
    #[error("region {region} is not a product: χ(R+) = {r_plus} but χ(R-) = {r_minus}")]
    NotAProduct { region: usize, r_plus: i64, r_minus: i64 },
    #[error("sector {index} does not exist ({count} sectors)")]
    SectorOutOfRange { index: usize, count: usize },
    #[error("sector {sector} has no corner data for the flipped coorientation")]
    MissingFlippedCorners { sector: usize },
    #[error("intersection count {k} must be even and at least 2")]
    InvalidIntersectionCount { k: i64 },
    #[error("sector {sector} has no chain embedding")]
    MissingEmbedding { sector: usize },
    #[error("sector {sector} embeds into cell {cell}, outside a chain group of rank {rank}")]
    CellOutOfRange { sector: usize, cell: usize, rank: usize },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Normal direction chosen on the boundary of the ambient manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCoorientation {
    Outward,
    Inward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    #[serde(rename = "chi")]
    pub euler_char: i64,
    /// Double corners on the boundary of the sector.
    #[serde(rename = "dc")]
    pub corner_count: u64,
    pub region_pos: usize,
    pub region_neg: usize,
    /// The dual arc as a 1-chain, `(cell, coefficient)` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<(usize, i64)>>,
    /// Double-corner count once the coorientation of this sector is reversed.
    #[serde(rename = "dc_flipped", default, skip_serializing_if = "Option::is_none")]
    pub flipped_corner_count: Option<u64>,
}

impl Sector {
    pub fn new(euler_char: i64, corner_count: u64, region_neg: usize, region_pos: usize) -> Self {
        Sector { euler_char, corner_count, region_pos, region_neg, chain: None, flipped_corner_count: None }
    }

    pub fn with_chain(mut self, chain: Vec<(usize, i64)>) -> Self {
        self.chain = Some(chain);
        self
    }
}

/// `χ_m(s) = χ(s) - dc(s)/2`. An odd corner count cannot come from an index
/// sum and is rejected.
pub fn maw_euler_characteristic(sector: &Sector) -> Result<i64, BranchedError> {
    if !sector.corner_count.is_multiple_of(2) {
        return Err(BranchedError::InconsistentCorners { sector: 0, dc: sector.corner_count });
    }
    Ok(sector.euler_char - (sector.corner_count / 2) as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    #[serde(rename = "r_plus_chi")]
    pub r_plus_char: i64,
    #[serde(rename = "r_minus_chi")]
    pub r_minus_char: i64,
}

impl Region {
    pub const PRODUCT_BALL: Region = Region { r_plus_char: 1, r_minus_char: 1 };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct BranchedComplex {
    boundary_coorientation: BoundaryCoorientation,
    sectors: Vec<Sector>,
    regions: Vec<Region>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    boundary_coorientation: BoundaryCoorientation,
    sectors: Vec<Sector>,
    regions: Vec<Region>,
}

impl TryFrom<RawComplex> for BranchedComplex {
    type Error = BranchedError;

    fn try_from(raw: RawComplex) -> Result<Self, Self::Error> {
        BranchedComplex::new(raw.boundary_coorientation, raw.sectors, raw.regions)
    }
}

impl BranchedComplex {
    pub fn new(
        boundary_coorientation: BoundaryCoorientation,
        sectors: Vec<Sector>,
        regions: Vec<Region>,
    ) -> Result<Self, BranchedError> {
        for (i, r) in regions.iter().enumerate() {
            if r.r_plus_char != r.r_minus_char {
                return Err(BranchedError::NotAProduct { region: i, r_plus: r.r_plus_char, r_minus: r.r_minus_char });
            }
        }
        for (i, s) in sectors.iter().enumerate() {
            for region in [s.region_pos, s.region_neg] {
                if region >= regions.len() {
                    return Err(BranchedError::RegionOutOfRange { sector: i, region, count: regions.len() });
                }
            }
        }
        Ok(BranchedComplex { boundary_coorientation, sectors, regions })
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("branched complex serializes")
    }

    pub fn boundary_coorientation(&self) -> BoundaryCoorientation {
        self.boundary_coorientation
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Mutable access for building corrupted or edited variants; region
    /// indices are re-validated by [`BranchedComplex::new`] only.
    pub fn sector_mut(&mut self, index: usize) -> Option<&mut Sector> {
        self.sectors.get_mut(index)
    }

    pub fn maw_euler_characteristic(&self, index: usize) -> Result<i64, BranchedError> {
        let sector = self.sector(index)?;
        maw_euler_characteristic(sector).map_err(|_| BranchedError::InconsistentCorners {
            sector: index,
            dc: sector.corner_count,
        })
    }

    fn sector(&self, index: usize) -> Result<&Sector, BranchedError> {
        self.sectors
            .get(index)
            .ok_or(BranchedError::SectorOutOfRange { index, count: self.sectors.len() })
    }
}

/// One arc per sector, running from the negative to the positive side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MawArc {
    pub sector: usize,
    pub tail: usize,
    pub head: usize,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MawGraph {
    pub region_count: usize,
    pub arcs: Vec<MawArc>,
}

pub fn maw_dual_graph(bc: &BranchedComplex) -> Result<MawGraph, BranchedError> {
    let arcs = (0..bc.sectors.len())
        .map(|i| {
            let s = &bc.sectors[i];
            Ok(MawArc { sector: i, tail: s.region_neg, head: s.region_pos, weight: bc.maw_euler_characteristic(i)? })
        })
        .collect::<Result<_, BranchedError>>()?;
    Ok(MawGraph { region_count: bc.regions.len(), arcs })
}

impl MawGraph {
    /// `Σ_s χ_m(s) · a(s)` in a chain group of rank `rank`.
    pub fn weighted_chain(&self, bc: &BranchedComplex, rank: usize) -> Result<Vec<i64>, BranchedError> {
        let mut chain = vec![0i64; rank];
        for arc in &self.arcs {
            let embedding = bc.sectors[arc.sector]
                .chain
                .as_ref()
                .ok_or(BranchedError::MissingEmbedding { sector: arc.sector })?;
            for &(cell, coeff) in embedding {
                if cell >= rank {
                    return Err(BranchedError::CellOutOfRange { sector: arc.sector, cell, rank });
                }
                chain[cell] += arc.weight * coeff;
            }
        }
        Ok(chain)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegionBalance {
    pub region: usize,
    pub weight_in: i64,
    pub weight_out: i64,
    pub r_plus_chi: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleViolation {
    /// Incoming and outgoing weight differ.
    Unbalanced { region: usize, weight_in: i64, weight_out: i64 },
    /// Outgoing weight differs from `χ(R₊)` of the region.
    CharacteristicMismatch { region: usize, weight_out: i64, expected: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub regions: Vec<RegionBalance>,
    pub violations: Vec<CycleViolation>,
}

impl CycleReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Weight conservation at every region. With outward boundary coorientation
/// the common value must also equal `χ(R₊)` of the region; with inward
/// coorientation only the balance is required.
pub fn check_cycle(graph: &MawGraph, bc: &BranchedComplex) -> CycleReport {
    let mut regions: Vec<RegionBalance> = bc
        .regions
        .iter()
        .enumerate()
        .map(|(region, r)| RegionBalance { region, weight_in: 0, weight_out: 0, r_plus_chi: r.r_plus_char })
        .collect();
    for arc in &graph.arcs {
        regions[arc.tail].weight_out += arc.weight;
        regions[arc.head].weight_in += arc.weight;
    }
    let mut violations = Vec::new();
    for r in &regions {
        if r.weight_in != r.weight_out {
            violations.push(CycleViolation::Unbalanced {
                region: r.region,
                weight_in: r.weight_in,
                weight_out: r.weight_out,
            });
        }
        if bc.boundary_coorientation == BoundaryCoorientation::Outward && r.weight_out != r.r_plus_chi {
            violations.push(CycleViolation::CharacteristicMismatch {
                region: r.region,
                weight_out: r.weight_out,
                expected: r.r_plus_chi,
            });
        }
    }
    CycleReport { regions, violations }
}

/// Reverses the coorientation of one sector: its sides swap, its dual arc
/// (and chain) is negated, and the stored flipped corner count becomes the
/// current one.
pub fn flip_sector_coorientation(bc: &BranchedComplex, index: usize) -> Result<BranchedComplex, BranchedError> {
    let sector = bc.sector(index)?;
    let flipped_dc = sector.flipped_corner_count.ok_or(BranchedError::MissingFlippedCorners { sector: index })?;
    let mut out = bc.clone();
    let s = &mut out.sectors[index];
    std::mem::swap(&mut s.region_pos, &mut s.region_neg);
    s.flipped_corner_count = Some(s.corner_count);
    s.corner_count = flipped_dc;
    if let Some(chain) = s.chain.as_mut() {
        for (_, coeff) in chain.iter_mut() {
            *coeff = -*coeff;
        }
    }
    Ok(out)
}

/// `(2 - k) · δ`, the change in the Euler class when a depth-most decomposing
/// disk whose boundary meets the sutures in `k` components is reversed.
pub fn swap_difference_class(k: i64, delta: &HomologyClass) -> Result<HomologyClass, BranchedError> {
    if k < 2 || k % 2 != 0 {
        return Err(BranchedError::InvalidIntersectionCount { k });
    }
    Ok(delta.scale(&BigInt::from(2 - k)))
}

/// Class of the weighted dual chain in `H₁` of `complex`.
pub fn graph_class(
    graph: &MawGraph,
    bc: &BranchedComplex,
    complex: &ChainComplex,
) -> Result<HomologyClass, BranchedError> {
    let chain = graph.weighted_chain(bc, complex.rank(1)?)?;
    Ok(complex.homology(1)?.class_of(&to_big(&chain))?)
}
