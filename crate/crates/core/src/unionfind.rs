/// Disjoint-set forest with path compression and union by size.
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    classes: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
            classes: len,
        }
    }

    pub fn find(&mut self, id: usize) -> usize {
        let mut root = id;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = id;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.classes -= 1;
    }

    /// Number of distinct classes.
    pub fn class_count(&self) -> usize {
        self.classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_reduce_class_count() {
        let mut uf = UnionFind::new(4);
        assert_eq!(uf.class_count(), 4);
        uf.union(0, 1);
        uf.union(2, 3);
        assert_eq!(uf.class_count(), 2);
        uf.union(1, 2);
        assert_eq!(uf.class_count(), 1);
        uf.union(0, 3);
        assert_eq!(uf.class_count(), 1);
        assert_eq!(uf.find(0), uf.find(3));
    }
}
