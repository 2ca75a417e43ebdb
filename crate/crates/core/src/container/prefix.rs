use super::Cuboid;

/// Inclusive-exclusive 3D prefix sums for O(1) box counts.
#[derive(Debug, Clone)]
pub(crate) struct Prefix3 {
    w1: usize,
    l1: usize,
    data: Vec<u32>,
}

impl Prefix3 {
    pub fn zeros(h: usize, w: usize, l: usize) -> Self {
        Self {
            w1: w + 1,
            l1: l + 1,
            data: vec![0; (h + 1) * (w + 1) * (l + 1)],
        }
    }

    /// `value(i)` is the content of cell `i` in (h, w, l) row-major order.
    pub fn build(h: usize, w: usize, l: usize, value: impl Fn(usize) -> u32) -> Self {
        let mut p = Self::zeros(h, w, l);
        let (w1, l1) = (p.w1, p.l1);
        for hh in 1..=h {
            for ww in 1..=w {
                for ll in 1..=l {
                    let v = value(((hh - 1) * w + (ww - 1)) * l + (ll - 1));
                    let at = |a: usize, b: usize, c: usize| (a * w1 + b) * l1 + c;
                    let d = &p.data;
                    let s = v + d[at(hh - 1, ww, ll)] + d[at(hh, ww - 1, ll)] + d[at(hh, ww, ll - 1)]
                        - d[at(hh - 1, ww - 1, ll)]
                        - d[at(hh - 1, ww, ll - 1)]
                        - d[at(hh, ww - 1, ll - 1)]
                        + d[at(hh - 1, ww - 1, ll - 1)];
                    p.data[at(hh, ww, ll)] = s;
                }
            }
        }
        p
    }

    #[inline]
    fn at(&self, h: u32, w: u32, l: u32) -> u32 {
        self.data[(h as usize * self.w1 + w as usize) * self.l1 + l as usize]
    }

    /// Sum over `c`, which must lie inside the grid.
    #[inline]
    pub fn sum(&self, c: &Cuboid) -> u32 {
        let (h0, w0, l0) = (c.h, c.w, c.l);
        let (h1, w1, l1) = (c.h_end(), c.w_end(), c.l_end());
        // Evaluate in an order that never underflows.
        let pos = self.at(h1, w1, l1) + self.at(h0, w0, l1) + self.at(h0, w1, l0) + self.at(h1, w0, l0);
        let neg = self.at(h0, w1, l1) + self.at(h1, w0, l1) + self.at(h1, w1, l0) + self.at(h0, w0, l0);
        pos - neg
    }
}
