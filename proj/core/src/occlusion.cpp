#include "pursuit/occlusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace pursuit {

OcclusionState classify_occlusion(int good_count, int n) {
    if (good_count < 0 || good_count > n)
        throw std::invalid_argument("classify_occlusion: count out of range");
    if (good_count == n) return OcclusionState::None;
    if (good_count == 0) return OcclusionState::Total;
    return OcclusionState::Partial;
}

char occlusion_letter(OcclusionState s) {
    switch (s) {
        case OcclusionState::None: return 'N';
        case OcclusionState::Partial: return 'P';
        case OcclusionState::Total: return 'T';
    }
    return '?';
}

namespace {

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else return true;
    }
    return false;
}

}  // namespace

TransitionCase classify_transition(OcclusionState old_state, OcclusionState new_state,
                                   std::vector<int> good_old, std::vector<int> good_new,
                                   int n) {
    auto row = [](OcclusionState s) {
        return s == OcclusionState::None ? 0 : s == OcclusionState::Partial ? 1 : 2;
    };
    TransitionCase tc;
    tc.index = 3 * row(old_state) + row(new_state) + 1;
    if (tc.index != 5) return tc;

    std::sort(good_old.begin(), good_old.end());
    std::sort(good_new.begin(), good_new.end());
    if (good_old.empty() || good_new.empty() || static_cast<int>(good_old.size()) >= n ||
        static_cast<int>(good_new.size()) >= n)
        throw std::invalid_argument("classify_transition: id sets inconsistent with P->P");

    std::vector<int> bad_old;
    for (int id = 0; id < n; ++id)
        if (!std::binary_search(good_old.begin(), good_old.end(), id)) bad_old.push_back(id);

    if (good_new == good_old) tc.subcase = 'a';
    else if (is_subset(good_old, good_new)) tc.subcase = 'b';
    else if (is_subset(good_new, good_old)) tc.subcase = 'c';
    else if (!intersects(good_new, good_old)) {
        tc.subcase = (good_new == bad_old) ? 'd' : 'e';
    } else tc.subcase = 'f';
    return tc;
}

}  // namespace pursuit
