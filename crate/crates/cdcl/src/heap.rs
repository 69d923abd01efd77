/// Binary max-heap of variable indices keyed by an external activity array.
#[derive(Default)]
pub(crate) struct VarHeap {
    heap: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl VarHeap {
    pub(crate) fn grow(&mut self, n: usize) {
        if self.position.len() < n {
            self.position.resize(n, None);
        }
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        self.position[v].is_some()
    }

    pub(crate) fn insert(&mut self, v: usize, act: &[f64]) {
        debug_assert!(!self.contains(v));
        self.position[v] = Some(self.heap.len());
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    /// Restores the heap after the activity of `v` increased.
    pub(crate) fn decrease(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.position[v] {
            self.sift_up(i, act);
        }
    }

    pub(crate) fn pop_max(&mut self, act: &[f64]) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().expect("non-empty heap");
        self.position[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.position[last] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p] >= act[v] {
                break;
            }
            self.heap[i] = p;
            self.position[p] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.position[v] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && act[self.heap[right]] > act[self.heap[left]] {
                right
            } else {
                left
            };
            if act[self.heap[child]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.position[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.position[v] = Some(i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_activity_order() {
        let act = vec![0.5, 3.0, 1.0, 2.0];
        let mut h = VarHeap::default();
        h.grow(4);
        for v in 0..4 {
            h.insert(v, &act);
        }
        let order: Vec<usize> = std::iter::from_fn(|| h.pop_max(&act)).collect();
        assert_eq!(order, vec![1, 3, 2, 0]);
    }
}
