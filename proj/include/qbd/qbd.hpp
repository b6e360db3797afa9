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

#ifndef QBD_QBD_HPP_
#define QBD_QBD_HPP_

#include "qbd/bdkernel.hpp"
#include "qbd/ctmcsim.hpp"
#include "qbd/errors.hpp"
#include "qbd/qbessel.hpp"
#include "qbd/qcore.hpp"
#include "qbd/qfourier.hpp"
#include "qbd/real.hpp"
#include "qbd/verify.hpp"

#endif  // QBD_QBD_HPP_
