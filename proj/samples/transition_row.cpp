// Copyright 2026 The qbd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Prints the transition probabilities from state 0 after time 1 for
// q = 1/2, nu = 1, together with the row-sum defect.

#include <iostream>

#include "qbd/qbd.hpp"

int main() {
  const qbd::QParams p = qbd::make_params("0.5", "1");
  const qbd::KernelMatrix M = qbd::transform_matrix(qbd::default_window(), p);
  const qbd::TransitionRow row = qbd::transition_row(0, qbd::Real::parse("1", M.bits()), M);
  for (int n = -6; n <= 6; ++n) {
    std::cout << "p(" << n << " <- 0, t=1) = " << row.at(n).to_string(20) << "\n";
  }
  std::cout << "row-sum defect = " << row.defect.to_string(3) << "\n";
  return 0;
}
