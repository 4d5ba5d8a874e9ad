#pragma once

#include "gp/model.h"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <unordered_set>
#include <vector>

namespace gp::memos {

using model::PropId;

struct Memo {
    int level = 0;
    std::vector<PropId> props; // sorted, nonempty
};

// Set-enumeration trie over sorted proposition sequences. Subset queries walk
// children in ascending element order, so the reported witness is the first
// stored subset in depth-first ascending order.
class UbTree {
public:
    UbTree();

    // False when the exact set is already stored.
    bool insert(const std::vector<PropId> &props);
    bool contains(const std::vector<PropId> &props) const;
    std::optional<std::vector<PropId>>
    first_subset(const std::vector<PropId> &query) const;

    std::size_t node_count() const { return node_count_; }

private:
    struct Node {
        std::map<PropId, std::unique_ptr<Node>> children;
        bool terminal = false;
    };

    bool find_subset(const Node &node, const std::vector<PropId> &query,
                     std::size_t from, std::vector<PropId> &path) const;

    Node root_;
    std::size_t node_count_ = 0;
};

enum class LookupMode { off, exact, subset, partial };

// Level-indexed store of failure memos. All index structures are maintained
// on insert; the lookup mode only selects the query discipline, so switching
// disciplines never changes what was learned. Duplicate inserts are ignored
// and do not touch the counters.
class MemoTable {
public:
    bool insert(int level, std::vector<PropId> props);
    // Returns a stored memo at `level` matching `goals` (sorted) under the
    // given mode, or nothing. Mode `off` never matches. Hits are counted.
    std::optional<Memo> lookup(LookupMode mode, int level,
                               const std::vector<PropId> &goals);

    std::uint64_t stored() const { return stored_; }
    std::uint64_t hits() const { return hits_; }
    std::uint64_t lookups() const { return lookups_; }
    std::uint64_t total_stored_length() const { return total_length_; }
    // Average memo length and failures-per-memo; 0 when nothing is stored.
    double avln() const;
    double avfm() const;

    std::uint64_t stored_at(int level) const;
    // Insertion-order log for oracles and dumps.
    const std::vector<Memo> &log() const { return log_; }
    std::vector<int> levels() const;

    void dump(std::ostream &out) const;

private:
    struct VecHash {
        std::size_t operator()(const std::vector<PropId> &v) const;
    };
    struct Level {
        UbTree tree;
        std::unordered_set<std::vector<PropId>, VecHash> exact;
        std::uint64_t count = 0;
    };

    std::map<int, Level> levels_;
    std::vector<Memo> log_;
    std::uint64_t stored_ = 0;
    std::uint64_t hits_ = 0;
    std::uint64_t lookups_ = 0;
    std::uint64_t total_length_ = 0;
};

// Reference implementation for differential tests: first stored memo (in
// insertion order) at `level` that is a subset of `goals`.
std::optional<Memo> naive_subset_scan(const std::vector<Memo> &log, int level,
                                      const std::vector<PropId> &goals);

} // namespace gp::memos
