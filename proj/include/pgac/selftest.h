// Copyright 2026 The PGAC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PGAC_SELFTEST_H_
#define PGAC_SELFTEST_H_

#include <ostream>

namespace pgac {

// Short consistency checks against closed-form and reference values. Prints
// one line per check and returns true when all pass.
bool RunSelfTest(std::ostream& out);

}  // namespace pgac

#endif  // PGAC_SELFTEST_H_
