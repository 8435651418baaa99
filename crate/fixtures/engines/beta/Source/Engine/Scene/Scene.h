#pragma once
#include "Node.h"

// Scene
