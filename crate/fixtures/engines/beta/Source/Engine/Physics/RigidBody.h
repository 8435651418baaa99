#pragma once
#include <Engine/Scene/Node.h>

// RigidBody
