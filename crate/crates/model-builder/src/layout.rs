use crate::spec::{Boundary, LadderSpec, Leg};
use std::collections::HashMap;

/// What lives on one chain position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    Link { r: usize, kind: LinkKind },
    Vertex { r: usize, leg: Leg },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    LegUp,
    Rung,
    LegDown,
}

impl LinkKind {
    pub fn of_leg(leg: Leg) -> LinkKind {
        match leg {
            Leg::Up => LinkKind::LegUp,
            Leg::Down => LinkKind::LegDown,
        }
    }
}

/// Which degrees of freedom are kept on the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayoutMode {
    /// All links, no matter: the unitary-gauge Hilbert space.
    LinksOnly,
    /// Links and matter vertices interleaved: the full Hilbert space.
    FullHilbert,
    /// Rungs only: the axial-gauge pure theory and its dual.
    RungChain,
    /// Matter vertices only: the clock limit.
    MatterOnly,
}

/// Deterministic bijection between ladder sites and 0-based chain positions.
///
/// Links-only cells are ordered (leg-up, rung, leg-down); the plaquette at
/// r = 1 on a rough-left ladder then touches positions {1, 3, 4, 5}. In
/// full-Hilbert mode the cell order is (leg-up link, up vertex, leg-down
/// link, down vertex, rung), the unique interleaving that keeps every bulk
/// term inside 6 consecutive positions.
#[derive(Debug, Clone)]
pub struct ChainLayout {
    pub mode: LayoutMode,
    pub n: usize,
    pub l: usize,
    pub boundary_left: Boundary,
    pub boundary_right: Boundary,
    sites: Vec<Site>,
    index: HashMap<Site, usize>,
}

pub fn chain_layout(spec: &LadderSpec, mode: LayoutMode) -> ChainLayout {
    let mut sites = Vec::new();
    let leg_rungs = spec.leg_link_rungs();
    for r in 1..=spec.l {
        let has_leg = leg_rungs.contains(&r);
        match mode {
            LayoutMode::LinksOnly => {
                if has_leg {
                    sites.push(Site::Link { r, kind: LinkKind::LegUp });
                }
                sites.push(Site::Link { r, kind: LinkKind::Rung });
                if has_leg {
                    sites.push(Site::Link { r, kind: LinkKind::LegDown });
                }
            }
            LayoutMode::FullHilbert => {
                if has_leg {
                    sites.push(Site::Link { r, kind: LinkKind::LegUp });
                }
                sites.push(Site::Vertex { r, leg: Leg::Up });
                if has_leg {
                    sites.push(Site::Link { r, kind: LinkKind::LegDown });
                }
                sites.push(Site::Vertex { r, leg: Leg::Down });
                sites.push(Site::Link { r, kind: LinkKind::Rung });
            }
            LayoutMode::RungChain => {
                sites.push(Site::Link { r, kind: LinkKind::Rung });
            }
            LayoutMode::MatterOnly => {
                sites.push(Site::Vertex { r, leg: Leg::Up });
                sites.push(Site::Vertex { r, leg: Leg::Down });
            }
        }
    }
    // A rough right edge appends its dangling leg links after the last cell.
    if spec.boundary_right == Boundary::Rough
        && matches!(mode, LayoutMode::LinksOnly | LayoutMode::FullHilbert)
    {
        let r = spec.l + 1;
        sites.push(Site::Link { r, kind: LinkKind::LegUp });
        sites.push(Site::Link { r, kind: LinkKind::LegDown });
    }
    let index = sites
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect::<HashMap<_, _>>();
    ChainLayout {
        mode,
        n: spec.n,
        l: spec.l,
        boundary_left: spec.boundary_left,
        boundary_right: spec.boundary_right,
        sites,
        index,
    }
}

impl ChainLayout {
    pub fn chain_length(&self) -> usize {
        self.sites.len()
    }

    pub fn site(&self, position: usize) -> Site {
        self.sites[position]
    }

    pub fn position(&self, site: Site) -> Option<usize> {
        self.index.get(&site).copied()
    }

    pub fn leg_link(&self, r: usize, leg: Leg) -> Option<usize> {
        self.position(Site::Link { r, kind: LinkKind::of_leg(leg) })
    }

    pub fn rung(&self, r: usize) -> Option<usize> {
        self.position(Site::Link { r, kind: LinkKind::Rung })
    }

    pub fn vertex(&self, r: usize, leg: Leg) -> Option<usize> {
        self.position(Site::Vertex { r, leg })
    }

    /// All link sites in chain order, as (position, site).
    pub fn links(&self) -> Vec<(usize, Site)> {
        self.sites
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Site::Link { .. }))
            .map(|(i, s)| (i, *s))
            .collect()
    }

    /// Bond indices separating unit cells: bond b sits between positions
    /// b-1 and b. Useful as entanglement cuts commensurate with the ladder.
    pub fn unit_cell_cuts(&self) -> Vec<usize> {
        let mut cuts = Vec::new();
        let mut count = 0usize;
        let mut cell = None;
        for s in &self.sites {
            let r = match s {
                Site::Link { r, .. } => *r,
                Site::Vertex { r, .. } => *r,
            };
            if let Some(prev) = cell {
                if r != prev {
                    cuts.push(count);
                }
            }
            cell = Some(r);
            count += 1;
        }
        cuts
    }
}
