use std::collections::VecDeque;

/// Length of the data window used by the window-based detectors.
pub const DD_WINDOW: usize = 20;

/// Fixed-capacity FIFO buffer. Statistics are recomputed from the stored
/// values on every call.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftWindow {
    capacity: usize,
    buf: VecDeque<f64>,
}

impl Default for DriftWindow {
    fn default() -> Self {
        Self::new(DD_WINDOW)
    }
}

impl DriftWindow {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 1, "window capacity must exceed 1");
        Self {
            capacity,
            buf: VecDeque::with_capacity(capacity + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.buf.len() == self.capacity
    }

    /// Appends `x`, evicting and returning the oldest value when full.
    pub fn push(&mut self, x: f64) -> Option<f64> {
        let evicted = if self.is_full() {
            self.buf.pop_front()
        } else {
            None
        };
        self.buf.push_back(x);
        evicted
    }

    pub fn clear(&mut self) {
        self.buf.clear();
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.buf.iter().copied()
    }

    pub fn mean(&self) -> f64 {
        self.iter().sum::<f64>() / self.len() as f64
    }

    /// Population (divide-by-n) standard deviation.
    pub fn std(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / self.len() as f64).sqrt()
    }

    /// Least-squares line against abscissae `0..len`, as `(slope, intercept)`.
    pub fn ols_line(&self) -> (f64, f64) {
        let n = self.len() as f64;
        let x_mean = (n - 1.0) / 2.0;
        let y_mean = self.mean();
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (i, y) in self.iter().enumerate() {
            let dx = i as f64 - x_mean;
            sxy += dx * (y - y_mean);
            sxx += dx * dx;
        }
        let slope = sxy / sxx;
        (slope, y_mean - slope * x_mean)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evicts_oldest_when_full() {
        let mut w = DriftWindow::new(3);
        assert_eq!(w.push(1.0), None);
        assert_eq!(w.push(2.0), None);
        assert_eq!(w.push(3.0), None);
        assert!(w.is_full());
        assert_eq!(w.push(4.0), Some(1.0));
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![2.0, 3.0, 4.0]);
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn statistics() {
        let mut w = DriftWindow::new(4);
        for x in [2.0, 4.0, 4.0, 6.0] {
            w.push(x);
        }
        assert_eq!(w.mean(), 4.0);
        assert!((w.std() - 2.0f64.sqrt()).abs() < 1e-15);

        let mut line = DriftWindow::default();
        for i in 0..20 {
            line.push(3.0 + 0.5 * i as f64);
        }
        let (slope, intercept) = line.ols_line();
        assert!((slope - 0.5).abs() < 1e-12);
        assert!((intercept - 3.0).abs() < 1e-12);
    }
}
