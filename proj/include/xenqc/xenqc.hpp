/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef XENQC_XENQC_HPP
#define XENQC_XENQC_HPP

#include "quantum_core.hpp"
#include "spin_system.hpp"
#include "spinoe_model.hpp"
#include "labeling.hpp"
#include "readout.hpp"
#include "experiments.hpp"

#endif // XENQC_XENQC_HPP
