//! Placement search: for each yaw rotation find the furthest-back,
//! rightmost, lowest feasible position, then keep the rotation that traps
//! the least empty space behind the package.
//!
//! Two exact prunings keep the scan cheap. The per-footprint contour is the
//! highest "lowest empty voxel" under the footprint: any lower origin would
//! overlap an occupied voxel. The LIFO table gives, per (h, w) cross-section,
//! the smallest `l` whose unloading corridor is clear; its minimum over all
//! cross-sections is `l_skip`, below which no position can pass.

use super::{Container, Cuboid, Extent, Footprint, PlacementRules, Placement};
use crate::instance::Package;

/// Result of a successful scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub placement: Placement,
    pub extent: Extent,
    /// Empty voxels trapped behind the package.
    pub waste: u64,
}

impl Candidate {
    fn cuboid(&self) -> Cuboid {
        Cuboid::new(self.placement, self.extent)
    }

    /// Manhattan distance of the origin corner from (0, 0, 0).
    pub fn loading_distance(&self) -> u64 {
        self.placement.h as u64 + self.placement.w as u64 + self.placement.l as u64
    }
}

impl Container {
    /// Best feasible position for `package`, or `None` when it cannot be
    /// loaded in either rotation. Weight capacity is not considered here.
    pub fn find_placement(&self, package: &Package, rules: &PlacementRules) -> Option<Candidate> {
        let unrotated = self.scan_rotation(package, false, rules);
        let rotated = if package.width == package.length {
            None
        } else {
            self.scan_rotation(package, true, rules)
        };
        match (unrotated, rotated) {
            (Some(a), Some(b)) => {
                let key = |c: &Candidate| (c.waste, c.loading_distance());
                Some(if key(&b) < key(&a) { b } else { a })
            }
            (a, b) => a.or(b),
        }
    }

    fn scan_rotation(&self, package: &Package, rotated: bool, rules: &PlacementRules) -> Option<Candidate> {
        let extent = Extent::of(package, rotated);
        let (hv, wv, lv) = (self.spec.height, self.spec.width, self.spec.length);
        if extent.height > hv || extent.width > wv || extent.length > lv {
            return None;
        }
        let (ph, pw, pl) = (extent.height, extent.width, extent.length);
        let rows_h = (hv - ph + 1) as usize;
        let rows_w = (wv - pw + 1) as usize;
        let rows_l = (lv - pl + 1) as usize;

        let lifo_min_l = self.lifo_table(package.client, extent, rules);
        let l_skip = lifo_min_l.iter().copied().min().unwrap_or(0);
        let contour = self.contour(extent);

        for l in l_skip..=(lv - pl) {
            for w in 0..=(wv - pw) {
                let start = contour[w as usize * rows_l + l as usize];
                if start + ph > hv {
                    continue;
                }
                for h in start..=(hv - ph) {
                    if l < lifo_min_l[h as usize * rows_w + w as usize] {
                        continue;
                    }
                    let cuboid = Cuboid {
                        h,
                        w,
                        l,
                        height: ph,
                        width: pw,
                        length: pl,
                    };
                    if self.occupied_in(&cuboid) != 0 {
                        continue;
                    }
                    let fp = Footprint {
                        w,
                        l,
                        width: pw,
                        length: pl,
                    };
                    if h > 0 && !(self.check_fragility(package, fp, h) && self.check_support(fp, h, rules.a_min)) {
                        continue;
                    }
                    if !self.check_cover(package, fp, h + ph) {
                        continue;
                    }
                    let mut found = Candidate {
                        placement: Placement { h, w, l, rotated },
                        extent,
                        waste: 0,
                    };
                    found.waste = self.compute_waste(&found.cuboid());
                    return Some(found);
                }
            }
        }
        debug_assert!(rows_h > 0);
        None
    }

    /// Smallest admissible `l` for each (h, w) origin of a box with `extent`,
    /// laid out as `[h * rows_w + w]`.
    fn lifo_table(&self, client: usize, extent: Extent, rules: &PlacementRules) -> Vec<u32> {
        let (hv, wv) = (self.spec.height as usize, self.spec.width as usize);
        // Door-most end of blocking packages per (h, w) line.
        let mut reach = vec![0u32; hv * wv];
        for b in self.boxes.iter().filter(|b| rules.lifo.blocks(client, b.client)) {
            let c = b.cuboid;
            for h in c.h..c.h_end() {
                for w in c.w..c.w_end() {
                    let r = &mut reach[h as usize * wv + w as usize];
                    *r = (*r).max(c.l_end());
                }
            }
        }
        let rows_h = hv - extent.height as usize + 1;
        let rows_w = wv - extent.width as usize + 1;
        let mut table = vec![0u32; rows_h * rows_w];
        for h in 0..rows_h {
            for w in 0..rows_w {
                let mut m = 0;
                for hh in h..h + extent.height as usize {
                    for ww in w..w + extent.width as usize {
                        m = m.max(reach[hh * wv + ww]);
                    }
                }
                table[h * rows_w + w] = m.saturating_sub(extent.length);
            }
        }
        table
    }

    /// Lowest origin height that avoids the filled bottom of every column
    /// under the footprint, laid out as `[w * rows_l + l]`.
    fn contour(&self, extent: Extent) -> Vec<u32> {
        let (wv, lv) = (self.spec.width as usize, self.spec.length as usize);
        let (pw, pl) = (extent.width as usize, extent.length as usize);
        let rows_w = wv - pw + 1;
        let rows_l = lv - pl + 1;
        let mut along_l = vec![0u32; wv * rows_l];
        for w in 0..wv {
            let col = &self.lowest_empty[w * lv..(w + 1) * lv];
            for l in 0..rows_l {
                along_l[w * rows_l + l] = col[l..l + pl].iter().copied().max().unwrap_or(0);
            }
        }
        let mut out = vec![0u32; rows_w * rows_l];
        for w in 0..rows_w {
            for l in 0..rows_l {
                out[w * rows_l + l] = (w..w + pw).map(|ww| along_l[ww * rows_l + l]).max().unwrap_or(0);
            }
        }
        out
    }
}
