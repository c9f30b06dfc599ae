// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace emojipred {

inline constexpr const char* kToolkitName = "emojipred";
inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace emojipred
