#pragma once

#include <vector>

namespace pursuit {

enum class OcclusionState { None, Partial, Total };

// good_count == n -> None; 0 < good_count < n -> Partial; 0 -> Total.
// (Equality with n is deliberately exclusive to None so the branches are
// disjoint.)
OcclusionState classify_occlusion(int good_count, int n);

char occlusion_letter(OcclusionState s);  // 'N' / 'P' / 'T'

// Transition case 1..9 under ordering (None, Partial, Total); the
// Partial->Partial case further resolves to subcase 'a'..'f' from the good-id
// set relation between the old and new frames.
struct TransitionCase {
    int index = 0;        // 1..9
    char subcase = '\0';  // 'a'..'f' when index == 5
};

// good_old / good_new are the ids tracked successfully in the old / new
// frame; n is the full point count. Ids must be unique within each set.
TransitionCase classify_transition(OcclusionState old_state, OcclusionState new_state,
                                   std::vector<int> good_old, std::vector<int> good_new,
                                   int n);

}  // namespace pursuit
