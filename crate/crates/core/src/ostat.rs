/// Multiset-free subset of `1..=capacity` supporting "k-th smallest" selection
/// and deletion in `O(log n)` (Fenwick tree over membership counts).
#[derive(Clone, Debug)]
pub struct OrderStatSet {
    tree: Vec<usize>,
    len: usize,
}

impl OrderStatSet {
    pub fn with_capacity(capacity: usize) -> Self {
        OrderStatSet { tree: vec![0; capacity + 1], len: 0 }
    }

    pub fn from_members(capacity: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::with_capacity(capacity);
        for m in members {
            set.insert(m);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn update(&mut self, mut i: usize, delta: isize) {
        while i < self.tree.len() {
            self.tree[i] = (self.tree[i] as isize + delta) as usize;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, mut i: usize) -> usize {
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && x < self.tree.len() && self.prefix(x) - self.prefix(x - 1) == 1
    }

    /// Inserts `x`; returns `false` if it was already present.
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x >= 1 && x < self.tree.len(), "element {x} out of range");
        if self.contains(x) {
            return false;
        }
        self.update(x, 1);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, x: usize) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.update(x, -1);
        self.len -= 1;
        true
    }

    /// The `k`-th smallest member (1-based), if there are at least `k`.
    pub fn select(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.len {
            return None;
        }
        let mut pos = 0;
        let mut remaining = k;
        let mut step = (self.tree.len()).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] < remaining {
                pos = next;
                remaining -= self.tree[next];
            }
            step >>= 1;
        }
        Some(pos + 1)
    }

    /// Selects and removes the `k`-th smallest member.
    pub fn take(&mut self, k: usize) -> Option<usize> {
        let x = self.select(k)?;
        self.remove(x);
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn select_and_take() {
        let mut s = OrderStatSet::from_members(10, [2, 3, 5, 7]);
        assert_eq!(s.select(1), Some(2));
        assert_eq!(s.select(4), Some(7));
        assert_eq!(s.select(5), None);
        assert_eq!(s.take(2), Some(3));
        assert_eq!(s.select(2), Some(5));
        assert_eq!(s.len(), 3);
        assert!(!s.insert(2));
    }

    proptest! {
        #[test]
        fn agrees_with_sorted_vec(
            members in proptest::collection::btree_set(1usize..=40, 0..40),
            picks in proptest::collection::vec(1usize..=40, 0..20),
        ) {
            let mut set = OrderStatSet::from_members(40, members.iter().copied());
            let mut reference: Vec<usize> = members.into_iter().collect();
            for k in picks {
                let expected = if k <= reference.len() { Some(reference.remove(k - 1)) } else { None };
                prop_assert_eq!(set.take(k), expected);
                prop_assert_eq!(set.len(), reference.len());
            }
        }
    }
}
