// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace schrodk {

__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

}  // namespace schrodk
