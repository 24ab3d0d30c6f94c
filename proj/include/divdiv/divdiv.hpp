#pragma once

#include "divdiv/assembly.hpp"
#include "divdiv/biharmonic.hpp"
#include "divdiv/commuting.hpp"
#include "divdiv/complexes.hpp"
#include "divdiv/divdiv_element.hpp"
#include "divdiv/dofmap.hpp"
#include "divdiv/hermite_element.hpp"
#include "divdiv/mesh.hpp"
#include "divdiv/mesh_io.hpp"
#include "divdiv/rotrot.hpp"
#include "divdiv/spaces.hpp"
#include "divdiv/study.hpp"
#include "divdiv/version.hpp"
