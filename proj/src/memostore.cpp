#include "gp/memostore.h"

#include "gp/util.h"

#include <cassert>
#include <stdexcept>

namespace gp::memos {

UbTree::UbTree() = default;

bool UbTree::insert(const std::vector<PropId> &props) {
    assert(std::is_sorted(props.begin(), props.end()));
    Node *node = &root_;
    for (PropId p : props) {
        std::unique_ptr<Node> &slot = node->children[p];
        if (!slot) {
            slot = std::make_unique<Node>();
            ++node_count_;
        }
        node = slot.get();
    }
    if (node->terminal)
        return false;
    node->terminal = true;
    return true;
}

bool UbTree::contains(const std::vector<PropId> &props) const {
    const Node *node = &root_;
    for (PropId p : props) {
        auto it = node->children.find(p);
        if (it == node->children.end())
            return false;
        node = it->second.get();
    }
    return node->terminal;
}

bool UbTree::find_subset(const Node &node, const std::vector<PropId> &query,
                         std::size_t from, std::vector<PropId> &path) const {
    if (node.terminal)
        return true;
    // Children and query are both ascending; advance through the query once.
    auto child = node.children.begin();
    for (std::size_t i = from; i < query.size() && child != node.children.end();) {
        if (child->first < query[i]) {
            child = node.children.lower_bound(query[i]);
        } else if (child->first > query[i]) {
            ++i;
        } else {
            path.push_back(child->first);
            if (find_subset(*child->second, query, i + 1, path))
                return true;
            path.pop_back();
            ++child;
            ++i;
        }
    }
    return false;
}

std::optional<std::vector<PropId>>
UbTree::first_subset(const std::vector<PropId> &query) const {
    std::vector<PropId> path;
    if (find_subset(root_, query, 0, path))
        return path;
    return std::nullopt;
}

std::size_t
MemoTable::VecHash::operator()(const std::vector<PropId> &v) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (PropId p : v) {
        h ^= static_cast<std::size_t>(p) + 0x9e3779b97f4a7c15ull;
        h *= 0x100000001b3ull;
    }
    return h;
}

bool MemoTable::insert(int level, std::vector<PropId> props) {
    if (props.empty())
        throw std::invalid_argument("memos must be nonempty");
    assert(std::is_sorted(props.begin(), props.end()));
    Level &lv = levels_[level];
    if (!lv.tree.insert(props))
        return false;
    lv.exact.insert(props);
    ++lv.count;
    ++stored_;
    total_length_ += props.size();
    log_.push_back({level, std::move(props)});
    return true;
}

std::optional<Memo> MemoTable::lookup(LookupMode mode, int level,
                                      const std::vector<PropId> &goals) {
    if (mode == LookupMode::off)
        return std::nullopt;
    ++lookups_;
    auto it = levels_.find(level);
    if (it == levels_.end())
        return std::nullopt;
    const Level &lv = it->second;

    auto hit = [&](std::vector<PropId> props) -> std::optional<Memo> {
        ++hits_;
        return Memo{level, std::move(props)};
    };

    switch (mode) {
    case LookupMode::exact:
        if (lv.exact.count(goals))
            return hit(goals);
        return std::nullopt;
    case LookupMode::subset:
        if (auto witness = lv.tree.first_subset(goals))
            return hit(std::move(*witness));
        return std::nullopt;
    case LookupMode::partial: {
        // Sets of size |goals| or |goals|-1 only: the exact set first, then
        // each drop-one subset in ascending order of the dropped position.
        if (lv.exact.count(goals))
            return hit(goals);
        if (goals.size() > 1) {
            std::vector<PropId> sub(goals.begin() + 1, goals.end());
            for (std::size_t drop = 0; drop < goals.size(); ++drop) {
                if (lv.exact.count(sub))
                    return hit(sub);
                if (drop + 1 < goals.size())
                    sub[drop] = goals[drop];
            }
        }
        return std::nullopt;
    }
    case LookupMode::off:
        break;
    }
    return std::nullopt;
}

double MemoTable::avln() const {
    return stored_ == 0 ? 0.0
                        : static_cast<double>(total_length_) /
                              static_cast<double>(stored_);
}

double MemoTable::avfm() const {
    return stored_ == 0
               ? 0.0
               : static_cast<double>(hits_) / static_cast<double>(stored_);
}

std::uint64_t MemoTable::stored_at(int level) const {
    auto it = levels_.find(level);
    return it == levels_.end() ? 0 : it->second.count;
}

std::vector<int> MemoTable::levels() const {
    std::vector<int> out;
    for (const auto &[level, lv] : levels_)
        if (lv.count > 0)
            out.push_back(level);
    return out;
}

void MemoTable::dump(std::ostream &out) const {
    // Per level, memos sorted lexicographically for a stable listing.
    for (const auto &[level, lv] : levels_) {
        std::vector<const std::vector<PropId> *> memos;
        for (const Memo &m : log_)
            if (m.level == level)
                memos.push_back(&m.props);
        std::sort(memos.begin(), memos.end(),
                  [](const auto *a, const auto *b) { return *a < *b; });
        for (const auto *props : memos) {
            out << "level " << level << ": {";
            for (std::size_t i = 0; i < props->size(); ++i) {
                if (i)
                    out << ",";
                out << (*props)[i];
            }
            out << "}\n";
        }
    }
}

std::optional<Memo> naive_subset_scan(const std::vector<Memo> &log, int level,
                                      const std::vector<PropId> &goals) {
    for (const Memo &m : log)
        if (m.level == level && util::sorted_is_subset(m.props, goals))
            return m;
    return std::nullopt;
}

} // namespace gp::memos
